#include "vdc/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

#include "vdc/errors.hpp"
#include "vdc/expsum.hpp"
#include "vdc/transform.hpp"

namespace vdc {
namespace {

const PhaseAmplitudeModel& example_model() {
  static const PhaseAmplitudeModel m = [] {
    return builtin_family(Family::power, {}, Interval{1.0, 1e7}).model;
  }();
  return m;
}

std::int64_t isqrt(std::int64_t v) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

const cplx kTwoPiI(0.0, kTwoPi);

void classify(ExampleReport& R, std::optional<cplx> c) {
  const std::int64_t N = R.N;
  const long double s = std::sqrt(static_cast<long double>(N) / 12.0L);
  const long double frac = s - std::floor(s + 0.5L);  // ties up
  R.threshold = std::pow(12.0 * static_cast<double>(N), -0.25);
  if (example_is_regime1(N)) {
    R.regime = 1;
    R.dist = 0.0;
    R.signed_frac = 0.0;
    R.predicted = 0.0;
    R.paper_bound = 1.0 / std::sqrt(static_cast<double>(N));
  } else {
    R.signed_frac = static_cast<double>(frac);
    R.dist = std::abs(R.signed_frac);
    const cplx phase = expi_turns(example_model().f(static_cast<long double>(N)));
    if (R.dist <= R.threshold) {
      R.regime = 2;
      R.predicted = 2.0 * sawtooth_psi(static_cast<double>(s)) *
                    std::pow(3.0 * static_cast<double>(N), 0.25) * phase * expi_turns(0.125);
      R.paper_bound = std::pow(static_cast<double>(N), 0.15) +
                      std::pow(static_cast<double>(N), 5.0 / 12.0) * std::cbrt(R.dist * R.dist);
    } else {
      R.regime = 3;
      R.predicted = phase * (1.0 / (kTwoPiI * R.signed_frac) -
                             modified_sawtooth(static_cast<double>(N), R.signed_frac, 1e-10));
      R.paper_bound = 1.0 / (std::sqrt(static_cast<double>(N)) * std::pow(R.dist, 3));
    }
  }
  R.residual = R.delta - R.predicted;
  if (c && R.regime != 2) {
    R.residual -= *c;
    R.c_subtracted = true;
  }
}

}  // namespace

bool example_is_regime1(std::int64_t N) {
  if (N <= 0 || N % 12 != 0) return false;
  const std::int64_t q = N / 12, k = isqrt(q);
  return k * k == q;
}

ExampleReport example_regimes(std::int64_t N, std::optional<cplx> c) {
  const std::int64_t one[] = {N};
  return example_regimes_batch(one, c).front();
}

std::vector<ExampleReport> example_regimes_batch(std::span<const std::int64_t> Ns,
                                                 std::optional<cplx> c) {
  for (auto N : Ns)
    if (N < 13) throw ParameterError("example: N must be >= 13");
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::int64_t> sorted(Ns.begin(), Ns.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<double> ends(sorted.begin(), sorted.end());
  const auto lhs = direct_starred_sums(example_model(), 1.0, ends);

  // Dual side: sqrt(24 r) e(-4r^3 + 1/8) = sqrt(24 r) e(1/8).
  const std::int64_t kmax = isqrt(sorted.back() / 12);
  std::vector<double> prefix(static_cast<std::size_t>(kmax) + 1, 0.0);
  {
    double s = 0.0, comp = 0.0;
    for (std::int64_t r = 1; r <= kmax; ++r) {
      const double v = std::sqrt(24.0 * static_cast<double>(r));
      const double t = s + v;
      comp += (std::abs(s) >= v) ? (s - t) + v : (v - t) + s;
      s = t;
      prefix[r] = s + comp;
    }
  }
  const cplx e8 = expi_turns(0.125);

  std::map<std::int64_t, ExampleReport> by_n;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    ExampleReport R;
    R.N = sorted[i];
    R.lhs = lhs[i];
    const std::int64_t K = isqrt(R.N / 12);
    double dual = prefix[K];
    if (example_is_regime1(R.N)) dual -= 0.5 * std::sqrt(24.0 * static_cast<double>(K));
    R.rhs = dual * e8;
    R.delta = R.lhs - R.rhs;
    classify(R, c);
    by_n[R.N] = R;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::vector<ExampleReport> out;
  for (auto N : Ns) {
    out.push_back(by_n[N]);
    out.back().seconds = secs;
  }
  return out;
}

ConstantEstimate fit_inverse_k(std::span<const std::int64_t> ks, std::span<const cplx> values,
                               double residual_limit) {
  if (ks.size() != values.size() || ks.size() < 2)
    throw ParameterError("fit_inverse_k: need at least two matched samples");
  ConstantEstimate E;
  E.ks.assign(ks.begin(), ks.end());
  E.deltas.assign(values.begin(), values.end());
  double s0 = 0, s1 = 0, s2 = 0;
  cplx y0 = 0, y1 = 0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double u = 1.0 / static_cast<double>(ks[i]);
    s0 += 1.0;
    s1 += u;
    s2 += u * u;
    y0 += values[i];
    y1 += u * values[i];
  }
  const double det = s0 * s2 - s1 * s1;
  E.c = (s2 * y0 - s1 * y1) / det;
  E.slope = (s0 * y1 - s1 * y0) / det;
  for (std::size_t i = 0; i < ks.size(); ++i)
    E.residual = std::max(
        E.residual, std::abs(values[i] - E.c - E.slope / static_cast<double>(ks[i])));
  E.cauchy = E.residual <= residual_limit;
  if (!E.cauchy) E.diagnostic = "fit residual above limit; sequence does not look Cauchy";
  return E;
}

ConstantEstimate estimate_c(std::int64_t k_min, std::int64_t k_max, double residual_limit) {
  if (!(k_max > k_min) || k_min < 10) throw ParameterError("estimate_c: need k_max > k_min >= 10");
  std::vector<std::int64_t> ks, Ns;
  for (std::int64_t k = k_min; k <= k_max; ++k) {
    ks.push_back(k);
    Ns.push_back(12 * k * k);
  }
  const auto reps = example_regimes_batch(Ns);
  std::vector<cplx> d;
  for (const auto& r : reps) d.push_back(r.delta);
  return fit_inverse_k(ks, d, residual_limit);
}

// ---------------------------------------------------------------------------

CKReport ck_quadratic(double omega, std::int64_t n, double C) {
  if (!(std::abs(omega) > 0.0 && std::abs(omega) < 1.0))
    throw ParameterError("ck: need 0 < |omega| < 1");
  if (n < 1) throw ParameterError("ck: need n >= 1");
  CKReport R;
  R.omega = omega;
  R.n = n;
  const double q = static_cast<double>(n) / omega;
  R.N = nearest_decomp(q).nearest;
  R.bound = C * std::abs(static_cast<double>(R.N) - q);
  // e(omega k^2/2) is even in k, so a negative upper limit mirrors to |N|.
  const std::int64_t top = std::abs(R.N);
  auto starred = [](std::int64_t last, auto&& term) {
    ComplexAccumulator acc;
    for (std::int64_t k = 0; k <= last; ++k) {
      const cplx t = term(k);
      acc.add((k == 0 || k == last) ? 0.5 * t : t);
    }
    return last == 0 ? cplx{} : acc.value();
  };
  const long double w = omega;
  R.lhs_sum = starred(top, [w](std::int64_t k) {
    const long double kk = static_cast<long double>(k);
    return expi_turns(w * kk * kk / 2.0L);
  });
  R.rhs_sum = starred(n, [w](std::int64_t k) {
    const long double kk = static_cast<long double>(k);
    return expi_turns(-kk * kk / (2.0L * w));
  });
  const double sgn = omega > 0 ? 1.0 : -1.0;
  R.difference =
      std::abs(R.lhs_sum - expi_turns(sgn / 8.0) / std::sqrt(std::abs(omega)) * R.rhs_sum);
  R.pass = R.difference <= R.bound + 1e-9;
  return R;
}

// ---------------------------------------------------------------------------

KLReport kusmin_landau_compare(const PhaseAmplitudeModel& m, double a, double b, double psi_tol) {
  if (!(b > a)) throw ParameterError("kl: need a < b");
  KLReport R;
  const double fa = m.f1(a), fb = m.f1(b);
  if (fprime_integral(m, a) || fprime_integral(m, b) || std::floor(fa) != std::floor(fb))
    throw ParameterError("kl: f' reaches an integer on [a,b] (theta = 0)");
  const auto da = fprime_decomp(m, a), db = fprime_decomp(m, b);
  R.theta = std::min(da.dist, db.dist);
  if (!(R.theta > 0.0)) throw ParameterError("kl: theta = 0");

  R.starred_sum = direct_starred_sum(m, a, b);
  const double lo = std::ceil(a), hi = std::floor(b);
  R.plain_sum = hi >= lo ? direct_starred_sum(m, lo - 0.5, hi + 0.5) : cplx{};
  R.cot_bound = 1.0 / std::tan(kPi * R.theta / 2.0);
  R.classical_ok = std::abs(R.plain_sum) <= R.cot_bound * (1.0 + 1e-12);
  R.inv_pi_theta = 1.0 / (kPi * R.theta);

  R.M = b - a;
  R.T = m.f2(0.5 * (a + b)) * R.M * R.M;
  R.corollary_applicable = da.dist > std::sqrt(m.f2(a)) && db.dist > std::sqrt(m.f2(b));
  R.corollary_bound = 1.0 / (R.M * R.theta * R.theta) +
                      R.T / (R.M * R.M * std::pow(R.theta, 3)) +
                      (1.0 + R.M / R.T) / std::sqrt(R.T);

  auto E = [&](double mu, const NearestIntDecomp& d) {
    const long double x = mu;
    return m.g(mu) * expi_turns(m.f(x) - static_cast<long double>(d.nearest) * x);
  };
  const cplx Ea = E(a, da), Eb = E(b, db);
  R.explicit_value = Eb / (kTwoPiI * db.signed_frac) - Ea / (kTwoPiI * da.signed_frac);
  R.residual = std::abs(R.starred_sum - R.explicit_value);
  R.full_prediction = R.explicit_value - Eb * modified_sawtooth(b, db.signed_frac, psi_tol) +
                      Ea * modified_sawtooth(a, da.signed_frac, psi_tol);
  // Integers r in [f'(a), f'(b)] would add dual terms; theta > 0 rules them out.
  R.residual_full = std::abs(R.starred_sum - R.full_prediction);
  return R;
}

// ---------------------------------------------------------------------------

IKReport ik_experiment(double alpha, double nu, double N, double X) {
  if (!(alpha > 1.0) || !(nu > 1.0)) throw ParameterError("ik: need alpha > 1 and nu > 1");
  if (!(N > 0.0) || !(X > 0.0) || N * N > X) throw ParameterError("ik: need 0 < N <= sqrt(X)");
  IKReport R;
  R.alpha = alpha;
  R.beta = alpha / (alpha - 1.0);
  R.nu = nu;
  R.N = N;
  R.X = X;
  R.M = X / N;
  R.mu = std::pow(nu, alpha - 1.0);
  const double pl[] = {alpha, N, X};
  const double pr[] = {R.beta, R.M, X};
  const auto left = builtin_family(Family::ik_monomial, pl, Interval{N, nu * N});
  const auto right = builtin_family(Family::ik_monomial, pr, Interval{R.M, R.mu * R.M});
  R.lhs = direct_starred_sum(left.model, N, nu * N);
  R.rhs = expi_turns(0.125) * std::conj(direct_starred_sum(right.model, R.M, R.mu * R.M));
  R.delta = R.lhs - R.rhs;
  R.rhs_transform = rhs_main_sum(left.model, N, nu * N).rhs_main;
  R.scale = 1.0 / std::sqrt(N) + 1.0 / std::sqrt(R.M);
  R.ratio = std::abs(R.delta) / R.scale;
  return R;
}

// ---------------------------------------------------------------------------

PoissonReport poisson_check(const PhaseAmplitudeModel& m, double a, double b,
                            std::span<const std::int64_t> Rs, double tol) {
  PoissonReport P;
  P.direct = direct_starred_sum(m, a, b);
  std::vector<std::int64_t> sorted(Rs.begin(), Rs.end());
  std::sort(sorted.begin(), sorted.end());
  ComplexAccumulator acc;
  std::int64_t done = -1;  // |r| <= done already summed
  for (auto R : sorted) {
    for (std::int64_t r = done + 1; r <= R; ++r) {
      acc.add(oscillatory_integral(m, static_cast<double>(r), a, b, tol).value);
      if (r != 0) acc.add(oscillatory_integral(m, static_cast<double>(-r), a, b, tol).value);
    }
    done = std::max(done, R);
    PoissonRow row;
    row.R = R;
    row.partial = acc.value();
    row.error = std::abs(row.partial - P.direct);
    double tail = 0.0;
    for (double mu : {a, b}) {
      const double fp = std::abs(m.f1(mu)), g = std::abs(m.g(mu));
      const double gap = static_cast<double>(R) - fp;
      if (!(gap > 1.0)) {
        tail = INFINITY;
        break;
      }
      tail += g * (fp + 1.0) / (kPi * gap) +
              (std::abs(m.g1(mu)) + g * m.f2(mu)) / (2.0 * kPi * kPi * gap);
      const double dmu = nearest_decomp(mu).dist;
      if (dmu > 0.0 && !is_integer_limit(mu)) tail += g / (kPi * static_cast<double>(R) * dmu);
    }
    row.tail_estimate = tail;
    row.ok = std::isfinite(tail) && row.error <= 10.0 * tail;
    P.all_ok = P.all_ok && row.ok;
    P.rows.push_back(row);
  }
  return P;
}

// ---------------------------------------------------------------------------

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ParameterError("loglog_slope: bad sizes");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

StationaryPhaseSweep stationary_phase_sweep(const PhaseAmplitudeModel& m,
                                            const ConditionMProfile& p, double r, Side side,
                                            std::span<const double> offsets, double tol) {
  StationaryPhaseSweep S;
  const double xr = invert_fprime(m, r);
  std::vector<double> xs, ys;
  for (double d : offsets) {
    const double mu = side == Side::left ? xr - d : xr + d;
    const auto est = stationary_phase_estimate(m, p, r, side, mu);
    const QuadResult q = side == Side::left ? oscillatory_integral(m, r, mu, est.xr, tol)
                                            : oscillatory_integral(m, r, est.xr, mu, tol);
    StationaryPhaseRow row;
    row.offset = d;
    row.oracle = q.value;
    row.estimate = est.explicit_terms;
    row.residual = std::abs(q.value - est.explicit_terms);
    row.bound = est.error_bound;
    S.rows.push_back(row);
    xs.push_back(d);
    ys.push_back(row.residual);
  }
  if (xs.size() >= 2) S.slope = loglog_slope(xs, ys);
  return S;
}

}  // namespace vdc
