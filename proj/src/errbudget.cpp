#include "vdc/errbudget.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vdc/errors.hpp"
#include "vdc/quad.hpp"

namespace vdc {
namespace {

constexpr double kRatioSlack = 1e-12;

bool finite_all(const PhaseAmplitudeModel& m, double x) {
  const double v[] = {static_cast<double>(m.f(x)), m.f1(x), m.f2(x), m.f3(x), m.f4(x),
                      m.g(x), m.g1(x), m.g2(x), m.g3(x)};
  for (double e : v)
    if (!std::isfinite(e)) return false;
  return true;
}

int c_shift(const PhaseAmplitudeModel& m, double x) {
  return m_count(m, x) > 0 ? 1 : 0;
}

std::vector<double> check_grid(double a, double b, int grid) {
  std::vector<double> xs;
  for (int j = 0; j < grid; ++j)
    xs.push_back(0.5 * (a + b) - 0.5 * (b - a) * std::cos(kPi * j / (grid - 1)));
  // Chebyshev nodes leave most decades empty on wide positive ranges.
  if (a > 0.0 && b / a > 16.0)
    for (int j = 1; j + 1 < grid; ++j) xs.push_back(a * std::pow(b / a, double(j) / (grid - 1)));
  std::sort(xs.begin(), xs.end());
  return xs;
}

// Piecewise adaptive integration over [lo, hi] with breakpoints spaced
// geometrically away from `anchor` (where the integrand is largest).
RealQuadResult integrate_from_anchor(const RealFn& fn, double lo, double hi, double anchor,
                                     double first) {
  RealQuadResult total;
  if (!(hi > lo)) return total;
  std::vector<double> cuts;
  first = std::max(first, 1e-12 * std::max(1.0, std::abs(anchor)));
  if (anchor <= lo) {
    cuts.push_back(lo);
    for (double w = first; lo + w < hi; w *= 2.0) cuts.push_back(anchor + w > lo ? anchor + w : lo + w);
    cuts.push_back(hi);
  } else {
    cuts.push_back(hi);
    for (double w = first; hi - w > lo; w *= 2.0) cuts.push_back(anchor - w < hi ? anchor - w : hi - w);
    cuts.push_back(lo);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i + 1] > cuts[i])) continue;
    const auto r = adaptive_integral(fn, cuts[i], cuts[i + 1], 1e-9, 0.0, 20'000);
    total.value += r.value;
    total.abs_error_estimate += r.abs_error_estimate;
    total.panels += r.panels;
    total.converged = total.converged && r.converged;
  }
  return total;
}

// Integration over [lo, hi] split geometrically when the range spans decades.
RealQuadResult integrate_span(const RealFn& fn, double lo, double hi) {
  if (lo > 0.0 && hi / lo > 4.0) return integrate_from_anchor(fn, lo, hi, 0.0, lo);
  return adaptive_integral(fn, lo, hi, 1e-9, 0.0, 20'000);
}

double fp_dist(const PhaseAmplitudeModel& m, double x) {
  return fprime_integral(m, x) ? 0.0 : fprime_decomp(m, x).dist;
}

}  // namespace

// ---------------------------------------------------------------------------

ConditionMReport check_condition_M(const PhaseAmplitudeModel& m, const ConditionMProfile& p,
                                   double a, double b, int grid) {
  if (grid < 16) throw ParameterError("check_condition_M: grid must be >= 16");
  if (!(b > a)) throw ParameterError("check_condition_M: need a < b");
  ConditionMReport R;
  R.grid = grid;
  const auto& k = p.k;
  const double eta = k.eta();

  R.part1 = std::max(p.M(a), p.M(b)) <= (b - a) * (1.0 + kRatioSlack);
  if (!R.part1) R.notes.push_back("part I: max(M(a), M(b)) exceeds b - a");
  R.part2 = k.delta < 1.0 && eta < 2.0;
  if (!R.part2) R.notes.push_back("part II: need delta < 1 and eta < 2");

  R.c_a = c_shift(m, a);
  R.c_b = c_shift(m, b);
  R.J = {a - R.c_a * p.M(a), b + R.c_b * p.M(b)};
  R.part3 = true;
  for (int i = 0; i <= 256; ++i) {
    const double x = R.J.lo + R.J.length() * i / 256.0;
    if (!finite_all(m, x)) {
      R.part3 = false;
      std::ostringstream os;
      os << "part III: non-finite derivative at x=" << x;
      R.notes.push_back(os.str());
      break;
    }
  }

  for (const char* name : kConditionMInequalities) R.worst.push_back({name, 0.0, a, a});

  bool ok4 = true;
  for (double x : check_grid(a, b, grid)) {
    const double Mx = p.M(x), Ux = p.U(x), f2x = m.f2(x);
    if (!(Mx > 0.0) || !(Ux > 0.0)) {
      ok4 = false;
      R.notes.push_back("M(x) and U(x) must be positive");
      break;
    }
    const double lo = std::max(x - Mx, R.J.lo), hi = std::min(x + Mx, R.J.hi);
    for (int s = 0; s < R.z_samples; ++s) {
      const double z = lo + (hi - lo) * s / (R.z_samples - 1);
      const double f2z = m.f2(z);
      const double lhs[] = {f2x / k.C2minus, f2z, std::abs(m.f3(z)), std::abs(m.f4(z)),
                            std::abs(m.g(z)), std::abs(m.g1(z)), std::abs(m.g2(z))};
      const double rhs[] = {f2z,
                            k.C2 * f2x,
                            eta * f2x / Mx,
                            eta * eta * k.C4 * f2x / (Mx * Mx),
                            k.D0 * Ux,
                            k.D1 * Ux / Mx,
                            k.D2 * Ux / (Mx * Mx)};
      for (int q = 0; q < 7; ++q) {
        double ratio;
        if (rhs[q] > 0.0)
          ratio = lhs[q] / rhs[q];
        else
          ratio = lhs[q] > 0.0 ? INFINITY : 0.0;
        if (!std::isfinite(lhs[q])) ratio = INFINITY;
        if (ratio > R.worst[q].ratio) R.worst[q] = {kConditionMInequalities[q], ratio, x, z};
        if (ratio > 1.0 + kRatioSlack) {
          ok4 = false;
          ++R.violation_count;
          if (R.violations.size() < 64)
            R.violations.push_back({kConditionMInequalities[q], x, z, lhs[q], rhs[q]});
        }
      }
    }
  }
  R.part4 = ok4;
  R.pass = R.part1 && R.part2 && R.part3 && R.part4;
  return R;
}

// ---------------------------------------------------------------------------

std::int64_t m_count_values(double fp, double fpp, bool fp_is_integer) {
  if (!(fpp > 0.0)) return 0;
  if (fp_is_integer) {
    // integers j with 0 < |j - fp| < fpp on each side
    return 2 * (static_cast<std::int64_t>(std::ceil(fpp)) - 1);
  }
  const double lo = fp - fpp, hi = fp + fpp;
  return static_cast<std::int64_t>(std::ceil(hi)) - static_cast<std::int64_t>(std::floor(lo)) - 1;
}

std::int64_t m_count(const PhaseAmplitudeModel& m, double mu) {
  return m_count_values(m.f1(mu), m.f2(mu), fprime_integral(m, mu));
}

BarPoints abar_bbar(const PhaseAmplitudeModel& m, double a, double b,
                    const ConditionMProfile& p) {
  BarPoints out;
  const double step_a = std::min(p.M(a), 1.0 / p.k.C2);
  const double step_b = std::min(p.M(b), 1.0 / p.k.C2);

  const double lo = a + step_a;
  if (lo <= b) {
    std::optional<double> x;
    if (fprime_integral(m, lo)) {
      x = lo;
    } else {
      const double r = std::ceil(m.f1(lo));
      if (fprime_integral(m, b) && std::nearbyint(m.f1(b)) == r)
        x = b;
      else if (r <= m.f1(b))
        x = std::clamp(invert_fprime(m, r), lo, b);
    }
    out.abar = x;
  }
  const double hi = b - step_b;
  if (hi >= a) {
    std::optional<double> x;
    if (fprime_integral(m, hi)) {
      x = hi;
    } else {
      const double r = std::floor(m.f1(hi));
      if (fprime_integral(m, a) && std::nearbyint(m.f1(a)) == r)
        x = a;
      else if (r >= m.f1(a))
        x = std::clamp(invert_fprime(m, r), a, hi);
    }
    out.bbar = x;
  }
  return out;
}

EndpointDeltas endpoint_deltas(const PhaseAmplitudeModel& m, const ConditionMProfile& p,
                               double mu, Endpoint, double a, double b) {
  EndpointDeltas d;
  const double U = p.U(mu), M = p.M(mu), f2 = m.f2(mu);
  const double dist = fp_dist(m, mu);
  d.m = m_count(m, mu);
  if (dist == 0.0) {
    d.delta1 = U / (f2 * f2 * std::pow(b - a, 3));
    d.delta1_case = "integer";
  } else if (d.m >= 1) {
    d.delta1 = std::min(U / std::sqrt(f2), U / dist);
    d.delta1_case = "min";
  } else {
    d.delta1 = 0.0;
    d.delta1_case = "zero";
  }
  d.delta2 = U / (f2 * f2 * M * M * M) * (1.0 + std::sqrt(f2) * M) * (1.0 + f2) +
             U * static_cast<double>(d.m) / (f2 * M);
  if (dist == 0.0 || d.m >= 1) {
    d.delta2 += U / M * std::min(1.0, 1.0 / f2) + U * std::min(f2, 1.0 / f2);
    d.delta2_case = "integer_or_m";
  } else {
    d.delta2 += U / (M * dist * dist) + U * f2 / (dist * dist * dist);
    d.delta2_case = "otherwise";
  }
  return d;
}

TailDeltas tail_deltas(const PhaseAmplitudeModel& m, const ConditionMProfile& p, double a,
                       double b, const BarPoints& bars) {
  TailDeltas t;
  if (bars.abar && *bars.abar > a) {
    const double ab = *bars.abar;
    const RealFn fn = [&](double x) {
      const double f2 = m.f2(x), d = x - a;
      return p.U(x) / (f2 * d * d * d) * (1.0 + 1.0 / (f2 * p.M(x)) + 1.0 / (f2 * d));
    };
    const auto q = integrate_from_anchor(fn, ab, b, a, ab - a);
    t.integral_a = q.value;
    t.converged = t.converged && q.converged;
    const double f2ab = m.f2(ab), f2b = m.f2(b);
    t.boundary_a = p.U(ab) / (f2ab * f2ab * std::pow(ab - a, 3)) +
                   p.U(b) / (f2b * f2b * std::pow(b - a, 3));
    t.delta3_a = t.integral_a + t.boundary_a;
  }
  if (bars.bbar && *bars.bbar < b) {
    const double bb = *bars.bbar;
    const RealFn fn = [&](double x) {
      const double f2 = m.f2(x), d = b - x;
      return p.U(x) / (f2 * d * d * d) * (1.0 + 1.0 / (f2 * p.M(x)) + 1.0 / (f2 * d));
    };
    const auto q = integrate_from_anchor(fn, a, bb, b, b - bb);
    t.integral_b = q.value;
    t.converged = t.converged && q.converged;
    const double f2bb = m.f2(bb), f2a = m.f2(a);
    t.boundary_b = p.U(bb) / (f2bb * f2bb * std::pow(b - bb, 3)) +
                   p.U(a) / (f2a * f2a * std::pow(b - a, 3));
    t.delta3_b = t.integral_b + t.boundary_b;
  }
  return t;
}

// ---------------------------------------------------------------------------

WRFunctions make_wr_functions(const PhaseAmplitudeModel& m) {
  WRFunctions w;
  w.H = [m](double x) { return m.g(x) * m.f3(x) + 3.0 * m.g1(x) * m.f2(x); };
  w.G = [m](double x) {
    const double f2 = m.f2(x);
    return 12.0 * m.g(x) * m.g2(x) * f2 * f2;
  };
  w.Hprime = [m](double x) {
    return m.g1(x) * m.f3(x) + m.g(x) * m.f4(x) + 3.0 * m.g2(x) * m.f2(x) +
           3.0 * m.g1(x) * m.f3(x);
  };
  w.Gprime = [m](double x) {
    const double f2 = m.f2(x);
    return 12.0 * (m.g1(x) * m.g2(x) * f2 * f2 + m.g(x) * m.g3(x) * f2 * f2 +
                   2.0 * m.g(x) * m.g2(x) * f2 * m.f3(x));
  };
  w.disc = [H = w.H, G = w.G](double x) {
    const double h = H(x);
    return h * h - G(x);
  };

  // Q = f' - r for the root branch, with Q'.
  struct QV {
    double q, dq;
  };
  auto qpm = [m, w](double x, double sign) {
    const double H = w.H(x), G = w.G(x), Hp = w.Hprime(x), Gp = w.Gprime(x);
    const double g2 = m.g2(x), g3 = m.g3(x);
    const double S = std::sqrt(std::max(0.0, H * H - G));
    const double Sp = S > 0.0 ? (2.0 * H * Hp - Gp) / (2.0 * S) : 0.0;
    const double num = H + sign * S;
    return QV{num / (2.0 * g2), (Hp + sign * Sp) / (2.0 * g2) - num * g3 / (2.0 * g2 * g2)};
  };
  auto q0 = [m, w](double x) {
    const double H = w.H(x), Hp = w.Hprime(x), g = m.g(x), f2 = m.f2(x);
    const double q = 3.0 * g * f2 * f2 / H;
    const double dq = 3.0 * (m.g1(x) * f2 * f2 + 2.0 * g * f2 * m.f3(x)) / H -
                      3.0 * g * f2 * f2 * Hp / (H * H);
    return QV{q, dq};
  };
  // W = g'/Q^2 - g f''/Q^3
  auto Wof = [m](double x, QV v) {
    return m.g1(x) / (v.q * v.q) - m.g(x) * m.f2(x) / (v.q * v.q * v.q);
  };
  auto Wpof = [m](double x, QV v) {
    const double q2 = v.q * v.q, q3 = q2 * v.q, q4 = q3 * v.q;
    const double g = m.g(x), g1 = m.g1(x), f2 = m.f2(x);
    return m.g2(x) / q2 - 2.0 * g1 * v.dq / q3 - (m.f3(x) * g + f2 * g1) / q3 +
           3.0 * f2 * g * v.dq / q4;
  };

  w.Wplus = [=](double x) { return Wof(x, qpm(x, 1.0)); };
  w.Wminus = [=](double x) { return Wof(x, qpm(x, -1.0)); };
  w.W0 = [m, H = w.H](double x) {
    const double h = H(x), f2 = m.f2(x);
    return -h * h * m.f3(x) / (27.0 * m.g(x) * std::pow(f2, 5));
  };
  w.Wplus_prime = [=](double x) { return Wpof(x, qpm(x, 1.0)); };
  w.Wminus_prime = [=](double x) { return Wpof(x, qpm(x, -1.0)); };
  w.W0_prime = [=](double x) { return Wpof(x, q0(x)); };
  w.rplus = [=](double x) { return m.f1(x) - qpm(x, 1.0).q; };
  w.rminus = [=](double x) { return m.f1(x) - qpm(x, -1.0).q; };
  w.r0 = [=](double x) { return m.f1(x) - q0(x).q; };
  w.rplus_prime = [=](double x) { return m.f2(x) - qpm(x, 1.0).dq; };
  w.rminus_prime = [=](double x) { return m.f2(x) - qpm(x, -1.0).dq; };
  w.r0_prime = [=](double x) { return m.f2(x) - q0(x).dq; };
  w.h = [m](double r, double x) {
    const double t = m.f1(x) - r;
    return (t * m.g1(x) - m.g(x) * m.f2(x)) / (t * t * t);
  };
  return w;
}

// ---------------------------------------------------------------------------

double smooth_delta4_integrand(const PhaseAmplitudeModel& m, const ConditionMProfile& p,
                               double x) {
  const double f2 = m.f2(x), M = p.M(x);
  return p.U(x) / (f2 * M * M * M) * (1.0 + std::sqrt(f2) * M) *
         (1.0 + (1.0 + std::abs(p.Mprime(x))) / (f2 * M));
}

bool alternate_delta4_applies(const PhaseAmplitudeModel& m, const ConditionMProfile& p,
                              double a, double b) {
  if (m_count(m, a) != 0 || m_count(m, b) != 0) return false;
  for (int i = 0; i <= 256; ++i) {
    const double x = a + (b - a) * i / 256.0;
    if (p.M(x) < std::max(b - x, x - a) * (1.0 - 1e-12)) return false;
  }
  return true;
}

namespace {

// K(I, W, r) over a list of intervals and isolated points. When `open_end`
// is set, the interval reaching it is integrated to infinity and the
// artificial endpoint is left out of the boundary sum.
KBreakdown k_functional(const std::vector<Interval>& intervals, const std::vector<double>& isolated,
                        const RealFn& W, const RealFn& Wp, const RealFn& rp, int samples,
                        std::vector<std::string>& diag, bool& converged,
                        std::optional<double> open_end = std::nullopt) {
  KBreakdown K;
  const RealFn integrand = [&](double x) { return std::abs(W(x)) * std::abs(rp(x)) + std::abs(Wp(x)); };
  for (const auto& I : intervals) {
    if (!(I.length() > 0.0)) continue;
    const bool to_inf = open_end && I.hi >= *open_end;
    double val;
    if (to_inf) {
      const auto t = integrate_to_infinity(integrand, I.lo, std::max(1.0, 0.01 * std::abs(I.lo)));
      val = t.value + t.remainder_bound;
      converged = converged && t.converged;
    } else {
      const auto q = integrate_span(integrand, I.lo, I.hi);
      val = q.value;
      converged = converged && q.converged;
    }
    if (!std::isfinite(val)) {
      std::ostringstream os;
      os << "K integral diverges on [" << I.lo << ", " << I.hi << "]";
      diag.push_back(os.str());
      val = INFINITY;
    }
    K.integral += val;

    // sign changes of r'
    const bool geo = I.lo > 0.0 && I.hi / I.lo > 16.0;
    double prev_x = I.lo, prev = rp(I.lo);
    for (int i = 1; i <= samples; ++i) {
      const double t = static_cast<double>(i) / samples;
      const double x = geo ? I.lo * std::pow(I.hi / I.lo, t) : I.lo + I.length() * t;
      const double v = rp(x);
      if (std::isfinite(prev) && std::isfinite(v) && prev != 0.0 && v != 0.0 &&
          (prev < 0) != (v < 0)) {
        double lo = prev_x, hi = x, flo = prev;
        for (int it = 0; it < 200 && hi - lo > 1e-10 * std::max(1.0, std::abs(lo)); ++it) {
          const double mid = 0.5 * (lo + hi), fm = rp(mid);
          if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        const double z = 0.5 * (lo + hi);
        K.boundary += std::abs(sawtooth_s(z) * W(z));
        ++K.sign_changes;
      }
      prev = v;
      prev_x = x;
    }
    for (double e : {I.lo, I.hi}) {
      if (to_inf && e == I.hi) continue;
      const double v = std::abs(sawtooth_s(e) * W(e));
      if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "W is not finite at interval endpoint x=" << e;
        diag.push_back(os.str());
      }
      K.boundary += v;
    }
  }
  for (double x : isolated) K.isolated += std::abs(W(x));
  return K;
}

double jnull_sum(const PhaseAmplitudeModel& m, const std::vector<double>& pts) {
  double s = 0.0;
  for (double x : pts) {
    const double f2 = m.f2(x), g2 = m.g2(x);
    s += std::abs(g2 * g2 / (m.g1(x) * f2 * f2));
  }
  return s;
}

}  // namespace

Delta4Breakdown global_delta4(const PhaseAmplitudeModel& m, const ConditionMProfile& p,
                              const AssumptionPartition& part, double a, double b,
                              bool allow_alternate) {
  Delta4Breakdown d;
  const RealFn smooth = [&](double x) { return smooth_delta4_integrand(m, p, x); };
  const auto q = integrate_span(smooth, a, b);
  d.smooth_integral = q.value;
  d.converged = q.converged;
  if (allow_alternate && alternate_delta4_applies(m, p, a, b)) {
    d.alternate_used = true;
    return d;
  }
  const WRFunctions w = make_wr_functions(m);
  const int ns = std::max(256, part.samples);
  d.K0 = k_functional(part.J0, part.J0_isolated, w.W0, w.W0_prime, w.r0_prime, ns,
                      d.diagnostics, d.converged);
  d.Kplus = k_functional(part.Jpm, part.Jpm_isolated, w.Wplus, w.Wplus_prime, w.rplus_prime, ns,
                         d.diagnostics, d.converged);
  d.Kminus = k_functional(part.Jpm, part.Jpm_isolated, w.Wminus, w.Wminus_prime, w.rminus_prime,
                          ns, d.diagnostics, d.converged);
  d.jnull_sum = jnull_sum(m, part.Jnull);
  for (const auto& s : part.diagnostics) d.diagnostics.push_back(s);
  return d;
}

// ---------------------------------------------------------------------------

ToInfinityDeltas toinfinity_deltas(const PhaseAmplitudeModel& m, const ConditionMProfile& p,
                                   double a, double b) {
  if (!(b > a)) throw ParameterError("toinfinity_deltas: need a < b");
  ToInfinityDeltas T;
  const auto U = p.U;
  const auto M = p.M;

  // K_b = {x in [a,b] : x + M(x) > b}, an interval ending at b.
  double kb_lo;
  if (a + M(a) > b) {
    kb_lo = a;
  } else {
    double lo = a, hi = b;
    for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(b)); ++it) {
      const double mid = 0.5 * (lo + hi);
      (mid + M(mid) > b ? hi : lo) = mid;
    }
    kb_lo = 0.5 * (lo + hi);
  }
  T.Kb = {kb_lo, b};

  const double f2b = m.f2(b), Mb = M(b), Ub = U(b);
  T.delta3p_b = Ub / (f2b * f2b * std::pow(b - a, 3)) +
                Ub / (f2b * f2b * Mb * Mb * Mb) * (1.0 + std::sqrt(f2b) * Mb);

  const BarPoints bars = abar_bbar(m, a, b, p);
  T.bbar = bars.bbar;
  double d4 = 0.0;
  if (bars.bbar && *bars.bbar >= kb_lo) {
    const double lo = kb_lo, hi = *bars.bbar;
    const RealFn fn = [&](double x) {
      const double f2 = m.f2(x), d = b - x, Mx = M(x);
      return U(x) / (f2 * d * d * d) * (1.0 + 1.0 / (f2 * Mx) + 1.0 / (Mx * d));
    };
    if (hi > lo) {
      const auto q = integrate_from_anchor(fn, lo, hi, b, b - hi);
      d4 += q.value;
      T.converged = T.converged && q.converged;
    }
    for (double e : {lo, hi}) {
      const double f2 = m.f2(e);
      d4 += U(e) / (f2 * f2 * std::pow(b - e, 3));
    }
  }
  d4 += endpoint_deltas(m, p, b, Endpoint::b, a, b).delta2;
  const RealFn smooth = [&](double x) { return smooth_delta4_integrand(m, p, x); };
  {
    const auto q = integrate_span(smooth, kb_lo, b);
    d4 += q.value;
    T.converged = T.converged && q.converged;
  }
  for (double e : {kb_lo, b}) {
    const double f2 = m.f2(e), Me = M(e);
    d4 += U(e) / (f2 * f2 * Me * Me * Me) * (1.0 + std::sqrt(f2) * Me);
  }
  T.delta4p_b = d4;

  // Delta5
  const RealFn first = [&](double x) {
    const double f2 = m.f2(x), d = x - a;
    return U(x) / (f2 * d * d * d) * (1.0 + 1.0 / (f2 * M(x)) + 1.0 / (f2 * d));
  };
  const double w0 = std::max(1.0, 0.01 * std::abs(b));
  const auto t1 = integrate_to_infinity(first, b, w0);
  const auto t2 = integrate_to_infinity(smooth, b, w0);
  T.delta5_integral_a = t1.value;
  T.delta5_smooth = t2.value;
  T.remainder_bound = t1.remainder_bound + t2.remainder_bound;
  T.horizon = std::max({t1.horizon, t2.horizon, 2.0 * b});
  T.converged = T.converged && t1.converged && t2.converged;

  const AssumptionPartition part =
      partition_assumptions(m, b, T.horizon, 4096, b > 0.0 ? Spacing::geometric : Spacing::uniform);
  const WRFunctions w = make_wr_functions(m);
  std::vector<std::string> diag;
  bool conv = true;
  const auto K0 = k_functional(part.J0, part.J0_isolated, w.W0, w.W0_prime, w.r0_prime, 4096, diag,
                               conv, T.horizon);
  const auto Kp = k_functional(part.Jpm, part.Jpm_isolated, w.Wplus, w.Wplus_prime, w.rplus_prime,
                               4096, diag, conv, T.horizon);
  const auto Km = k_functional(part.Jpm, part.Jpm_isolated, w.Wminus, w.Wminus_prime,
                               w.rminus_prime, 4096, diag, conv, T.horizon);
  T.delta5_k = K0.total() + Kp.total() + Km.total() + jnull_sum(m, part.Jnull);
  T.converged = T.converged && conv;
  T.delta5 = T.delta5_integral_a + T.delta5_smooth + T.remainder_bound + T.delta5_k;
  return T;
}

// ---------------------------------------------------------------------------

ErrorBudget compute_budget(const PhaseAmplitudeModel& m, const ConditionMProfile& p, double a,
                           double b, const AssumptionPartition& part, const BudgetOptions& opt) {
  ErrorBudget B;
  B.end_a = endpoint_deltas(m, p, a, Endpoint::a, a, b);
  B.end_b = endpoint_deltas(m, p, b, Endpoint::b, a, b);
  B.bars = abar_bbar(m, a, b, p);
  B.tails = tail_deltas(m, p, a, b, B.bars);
  if (!B.tails.converged) B.diagnostics.push_back("Delta3 quadrature did not converge");
  B.delta4 = global_delta4(m, p, part, a, b, opt.allow_alternate);
  if (!B.delta4.converged) B.diagnostics.push_back("Delta4 quadrature did not converge");
  for (const auto& s : B.delta4.diagnostics) B.diagnostics.push_back(s);
  return B;
}

}  // namespace vdc
