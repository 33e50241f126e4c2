#include "vdc/quad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "vdc/kernels.hpp"

namespace vdc {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Gauss-Kronrod 7/15 (QUADPACK qk15 tables).
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct RealPanel {
  double a, b, value, err;
  bool operator<(const RealPanel& o) const { return err < o.err; }
};

RealPanel gk15_real(const std::function<double(double)>& fn, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = fn(c);
  double k = kWgk[7] * fc;
  double g = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double v = fn(c - h * kXgk[j]) + fn(c + h * kXgk[j]);
    k += kWgk[j] * v;
    if (j % 2 == 1) g += kWg[j / 2] * v;
  }
  return {a, b, k * h, std::abs((k - g) * h)};
}

struct CplxPanel {
  cplx k, g;
  double mass;  // sum of |weights|, scale of the rounding error
};

// Phase in turns, reduced, for f(x) - r x.
double reduced_phase(const PhaseAmplitudeModel& m, double r, double x) {
  const long double v = m.f(x) - static_cast<long double>(r) * x;
  return static_cast<double>(v - std::nearbyintl(v));
}

CplxPanel gk15_osc(const PhaseAmplitudeModel& m, double r, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double ka[15], kt[15], ga[7], gt[7];
  int n = 0, ng = 0;
  auto node = [&](double x, double wk, double wg, bool gauss) {
    const double amp = m.g(x) * h;
    const double t = reduced_phase(m, r, x);
    ka[n] = amp * wk;
    kt[n++] = t;
    if (gauss) {
      ga[ng] = amp * wg;
      gt[ng++] = t;
    }
  };
  node(c, kWgk[7], kWg[3], true);
  for (int j = 0; j < 7; ++j) {
    const bool gauss = j % 2 == 1;
    const double wg = gauss ? kWg[j / 2] : 0.0;
    node(c - h * kXgk[j], kWgk[j], wg, gauss);
    node(c + h * kXgk[j], kWgk[j], wg, gauss);
  }
  ComplexAccumulator K, G;
  kernels::cis_accumulate(std::span<const double>(ka, 15), std::span<const double>(kt, 15), K);
  kernels::cis_accumulate(std::span<const double>(ga, 7), std::span<const double>(gt, 7), G);
  double mass = 0.0;
  for (double v : ka) mass += std::abs(v);
  return {K.value(), G.value(), mass};
}

}  // namespace

RealQuadResult adaptive_integral(const std::function<double(double)>& fn, double a, double b,
                                 double rel_tol, double abs_tol, std::int64_t panel_cap) {
  RealQuadResult out;
  if (a == b) return out;
  const double sign = b < a ? -1.0 : 1.0;
  if (b < a) std::swap(a, b);
  std::priority_queue<RealPanel> heap;
  RealPanel first = gk15_real(fn, a, b);
  heap.push(first);
  double total = first.value, err = first.err;
  std::int64_t panels = 1;
  while (err > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (panels >= panel_cap) {
      out.converged = false;
      break;
    }
    RealPanel p = heap.top();
    heap.pop();
    const double mid = 0.5 * (p.a + p.b);
    if (!(mid > p.a && mid < p.b)) {
      out.converged = false;
      heap.push(p);
      break;
    }
    const RealPanel l = gk15_real(fn, p.a, mid), r = gk15_real(fn, mid, p.b);
    total += l.value + r.value - p.value;
    err += l.err + r.err - p.err;
    heap.push(l);
    heap.push(r);
    ++panels;
  }
  // re-sum from the panels to shed accumulated update rounding
  double s = 0.0, c = 0.0, e = 0.0;
  while (!heap.empty()) {
    const double v = heap.top().value;
    e += heap.top().err;
    heap.pop();
    const double t = s + v;
    c += std::abs(s) >= std::abs(v) ? (s - t) + v : (v - t) + s;
    s = t;
  }
  out.value = sign * (s + c);
  out.abs_error_estimate = e;
  out.panels = panels;
  if (!std::isfinite(out.value)) out.converged = false;
  return out;
}

QuadResult oscillatory_integral(const PhaseAmplitudeModel& m, double r, double alpha, double beta,
                                double tol, std::int64_t panel_cap) {
  QuadResult out;
  if (!(tol > 0.0)) throw ParameterError("oscillatory_integral: tol must be positive");
  if (alpha == beta) return out;
  const double sign = beta < alpha ? -1.0 : 1.0;
  if (beta < alpha) std::swap(alpha, beta);
  if (alpha < m.domain.lo || beta > m.domain.hi)
    throw RangeError("oscillatory_integral: interval outside model domain", m.domain.lo, m.domain.hi);

  const double len = beta - alpha;
  const auto dphase = [&](double x) { return std::abs(m.f1(x) - r); };
  ComplexAccumulator acc;
  double err_total = 0.0;
  std::int64_t panels = 0;

  struct Seg {
    double a, b;
    int depth;
  };
  std::vector<Seg> stack;
  double x = alpha;
  while (x < beta) {
    double w = beta - x;
    const double d0 = dphase(x);
    if (d0 * w > 1.0) w = 1.0 / d0;
    for (int it = 0; it < 8; ++it) {
      const double mx = std::max(d0, dphase(std::min(beta, x + w)));
      if (mx * w <= 1.0) break;
      w = 1.0 / mx;
    }
    double xe = std::min(beta, x + w);
    if (!(xe > x)) xe = std::nextafter(x, beta);

    stack.push_back({x, xe, 0});
    while (!stack.empty()) {
      const Seg s = stack.back();
      stack.pop_back();
      const CplxPanel p = gk15_osc(m, r, s.a, s.b);
      ++panels;
      const double e = std::abs(p.k - p.g);
      // below ~64 ulp of the panel mass the G7/K15 gap is rounding noise
      const double local_tol = std::max(tol * (s.b - s.a) / len, 64.0 * kEps * p.mass);
      if (e <= local_tol || s.depth >= 50 || panels >= panel_cap) {
        acc.add(p.k);
        err_total += e;
        if (e > local_tol) out.converged = false;
      } else {
        const double mid = 0.5 * (s.a + s.b);
        stack.push_back({mid, s.b, s.depth + 1});
        stack.push_back({s.a, mid, s.depth + 1});
      }
    }
    x = xe;
  }
  out.value = sign * acc.value();
  out.abs_error_estimate = err_total;
  out.panels = panels;
  return out;
}

TailIntegral integrate_to_infinity(const std::function<double(double)>& fn, double a,
                                   double first_width, double rel_cutoff, int max_blocks) {
  TailIntegral out;
  double lo = a, w = first_width, peak = 0.0;
  std::vector<double> blocks;
  ComplexAccumulator acc;
  for (int k = 0; k < max_blocks; ++k) {
    const double hi = lo + w;
    const RealQuadResult q = adaptive_integral(fn, lo, hi, 1e-12, 0.0);
    acc.add({q.value, 0.0});
    blocks.push_back(std::abs(q.value));
    peak = std::max({peak, std::abs(fn(lo)), std::abs(q.value) / w});
    const double tail_val = std::abs(fn(hi));
    lo = hi;
    w *= 2.0;
    out.horizon = hi;
    if (peak == 0.0 && k >= 3) {
      out.converged = out.monotone_tail = true;
      break;
    }
    const std::size_t n = blocks.size();
    if (n >= 4 && tail_val <= rel_cutoff * peak) {
      const bool mono = blocks[n - 1] <= blocks[n - 2] && blocks[n - 2] <= blocks[n - 3];
      const double q_ratio = blocks[n - 2] > 0.0 ? blocks[n - 1] / blocks[n - 2] : 0.0;
      if (mono && q_ratio < 1.0) {
        out.monotone_tail = true;
        out.remainder_bound = blocks[n - 1] * q_ratio / (1.0 - q_ratio);
        out.converged = true;
        break;
      }
    }
  }
  out.value = acc.value().real();
  return out;
}

StationaryPhaseEstimate stationary_phase_estimate(const PhaseAmplitudeModel& m,
                                                  const ConditionMProfile& p, double r, Side side,
                                                  double mu) {
  StationaryPhaseEstimate out;
  const double c = invert_fprime(m, r);
  out.xr = c;
  if (side == Side::left && !(mu < c))
    throw ParameterError("stationary_phase_estimate: left side needs mu < x_r");
  if (side == Side::right && !(mu > c))
    throw ParameterError("stationary_phase_estimate: right side needs mu > x_r");
  const double Mc = p.M(c);
  if (std::abs(mu - c) > Mc * (1.0 + 1e-12))
    throw ParameterError("stationary_phase_estimate: |mu - x_r| exceeds M(x_r)");

  double Fc;
  if (m.dual_phase_turns && is_near_integer(r, 0.0))
    Fc = (*m.dual_phase_turns)(std::llround(r));
  else
    Fc = reduced_phase(m, r, c);
  const cplx ec = expi_turns(Fc);
  const cplx two_pi_i(0.0, kTwoPi);
  const double f2 = m.f2(c), f3 = m.f3(c), gc = m.g(c), g1 = m.g1(c);
  out.main_term = gc * expi_turns(Fc + 0.125) / (2.0 * std::sqrt(f2));
  const cplx t3 = gc * f3 * ec / (3.0 * two_pi_i * f2 * f2);  // /(6 pi i)
  const cplx tg = g1 * ec / (two_pi_i * f2);
  const cplx tmu = m.g(mu) * expi_turns(reduced_phase(m, r, mu)) / (two_pi_i * (m.f1(mu) - r));
  if (side == Side::left)
    out.explicit_terms = out.main_term - t3 + tg - tmu;
  else
    out.explicit_terms = out.main_term + t3 - tg + tmu;

  const double U = p.U(c), d = std::abs(mu - c);
  out.error_bound = U / (f2 * f2 * d * d * d) + U / (std::pow(f2, 1.5) * Mc * Mc);
  return out;
}

DerivativeTestBounds derivative_test_bounds(const PhaseAmplitudeModel& m,
                                            const ConditionMProfile& p, double alpha, double beta,
                                            double r) {
  if (beta < alpha) std::swap(alpha, beta);
  DerivativeTestBounds out;
  const double da = m.f1(alpha) - r, db = m.f1(beta) - r;
  out.stationary_inside = da <= 0.0 && db >= 0.0;
  out.kappa = out.stationary_inside ? 0.0 : std::min(std::abs(da), std::abs(db));

  constexpr int kSamples = 256;
  double lam = INFINITY, gmax = 0.0;
  for (int i = 0; i <= kSamples; ++i) {
    const double x = alpha + (beta - alpha) * i / kSamples;
    lam = std::min(lam, m.f2(x));
    gmax = std::max(gmax, std::abs(m.g(x)));
  }
  out.lambda = lam;
  const RealQuadResult tv =
      adaptive_integral([&](double x) { return std::abs(m.g1(x)); }, alpha, beta, 1e-10, 1e-300);
  out.variation = tv.value + gmax;
  out.first = out.kappa > 0.0 ? out.variation / (kPi * out.kappa) : INFINITY;
  out.second = 4.0 * out.variation / std::sqrt(kPi * lam);

  const double x = 0.5 * (alpha + beta);
  const double U = p.U ? p.U(x) : gmax;
  out.first_M = out.kappa > 0.0 ? U / out.kappa : INFINITY;
  out.second_M = U / std::sqrt(m.f2(x));
  return out;
}

}  // namespace vdc
