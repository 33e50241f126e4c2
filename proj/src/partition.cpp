#include <algorithm>
#include <cmath>
#include <sstream>

#include "vdc/errbudget.hpp"
#include "vdc/errors.hpp"

namespace vdc {
namespace {

constexpr double kZeroRel = 1e-12;   // sample value treated as zero
constexpr double kPointRel = 1e-8;   // value at a refined point treated as zero

std::vector<double> nodes(double a, double b, int n, Spacing spacing) {
  std::vector<double> x(static_cast<std::size_t>(n) + 1);
  const bool geo = spacing == Spacing::geometric && a > 0.0;
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    x[i] = geo ? a * std::pow(b / a, t) : a + (b - a) * t;
  }
  x.front() = a;
  x.back() = b;
  return x;
}

double point_tol(double x) { return 1e-10 * std::max(1.0, std::abs(x)); }

// Boundary between a point where pred holds and one where it does not.
template <class Pred>
double bisect_pred(const Pred& pred, double in, double out) {
  for (int it = 0; it < 200 && std::abs(out - in) > point_tol(in); ++it) {
    const double mid = 0.5 * (in + out);
    (pred(mid) ? in : out) = mid;
  }
  return 0.5 * (in + out);
}

// Zero of fn between lo and hi with fn(lo), fn(hi) of opposite sign.
double bisect_root(const RealFn& fn, double lo, double hi) {
  double flo = fn(lo);
  for (int it = 0; it < 200 && (hi - lo) > point_tol(lo); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = fn(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double golden_max(const RealFn& fn, double lo, double hi) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - invphi * (hi - lo), d = lo + invphi * (hi - lo);
  double fc = fn(c), fd = fn(d);
  for (int it = 0; it < 200 && (hi - lo) > point_tol(lo); ++it) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - invphi * (hi - lo);
      fc = fn(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + invphi * (hi - lo);
      fd = fn(d);
    }
  }
  return 0.5 * (lo + hi);
}

double max_abs(const std::vector<double>& v) {
  double s = 0.0;
  for (double e : v)
    if (std::isfinite(e)) s = std::max(s, std::abs(e));
  return s;
}

bool is_zero(double v, double scale) { return std::abs(v) <= kZeroRel * scale; }

std::string at(const char* what, double x) {
  std::ostringstream os;
  os.precision(12);
  os << what << " at x=" << x;
  return os.str();
}

}  // namespace

AssumptionPartition partition_assumptions(const PhaseAmplitudeModel& m, double a, double b,
                                          int samples, Spacing spacing) {
  if (samples < 256) throw ParameterError("partition_assumptions: samples must be >= 256");
  if (!(b > a)) throw ParameterError("partition_assumptions: need a < b");
  AssumptionPartition P;
  P.J = {a, b};
  P.samples = samples;
  const WRFunctions wr = make_wr_functions(m);
  const auto xs = nodes(a, b, samples, spacing);
  const std::size_t n = xs.size();

  std::vector<double> G(n), D(n), g2(n), g0(n), H(n), g1(n);
  for (std::size_t i = 0; i < n; ++i) {
    G[i] = wr.G(xs[i]);
    D[i] = wr.disc(xs[i]);
    g2[i] = m.g2(xs[i]);
    g0[i] = m.g(xs[i]);
    g1[i] = m.g1(xs[i]);
    H[i] = wr.H(xs[i]);
  }
  const double Gs = max_abs(G), Ds = max_abs(D), g2s = max_abs(g2), gs = max_abs(g0),
               Hs = max_abs(H), g1s = max_abs(g1);

  auto in_pm = [&](double x) {
    const double Gx = wr.G(x);
    const double Dx = wr.disc(x);
    return !is_zero(Gx, Gs) && (Dx >= 0.0 || is_zero(Dx, Ds));
  };
  auto in_0 = [&](double x) {
    return is_zero(m.g2(x), g2s) && !is_zero(m.g(x), gs) && !is_zero(wr.H(x), Hs);
  };

  // Flag samples whose sign is within the zero band without being exactly zero.
  for (std::size_t i = 0; i < n; ++i) {
    const bool amb = (G[i] != 0.0 && is_zero(G[i], Gs) && Gs > 0.0) ||
                     (g2[i] != 0.0 && is_zero(g2[i], g2s) && g2s > 0.0);
    if (amb) P.flagged.push_back({xs[i == 0 ? 0 : i - 1], xs[std::min(i + 1, n - 1)]});
  }

  // Runs of a predicate become intervals; endpoints refined by bisection.
  auto runs = [&](const std::vector<char>& member, const auto& pred, std::vector<Interval>& out,
                  std::vector<double>& singles) {
    std::size_t i = 0;
    while (i < n) {
      if (!member[i]) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j + 1 < n && member[j + 1]) ++j;
      const double lo = i == 0 ? xs[0] : bisect_pred(pred, xs[i], xs[i - 1]);
      const double hi = j == n - 1 ? xs[n - 1] : bisect_pred(pred, xs[j], xs[j + 1]);
      if (j > i || i == 0 || j == n - 1)
        out.push_back({lo, hi});
      else
        singles.push_back(xs[i]);
      i = j + 1;
    }
  };

  std::vector<char> mpm(n), m0(n);
  for (std::size_t i = 0; i < n; ++i) {
    mpm[i] = !is_zero(G[i], Gs) && (D[i] >= 0.0 || is_zero(D[i], Ds));
    m0[i] = is_zero(g2[i], g2s) && !is_zero(g0[i], gs) && !is_zero(H[i], Hs);
  }
  runs(mpm, in_pm, P.Jpm, P.Jpm_isolated);
  runs(m0, in_0, P.J0, P.J0_isolated);

  // J+-*: H^2 - G touching zero from below where G != 0.
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (mpm[i - 1] || mpm[i] || mpm[i + 1]) continue;
    if (!(D[i] >= D[i - 1] && D[i] >= D[i + 1]) || D[i] >= 0.0) continue;
    const double xm = golden_max(wr.disc, xs[i - 1], xs[i + 1]);
    if (is_zero(wr.disc(xm), Ds) && !is_zero(wr.G(xm), Gs)) P.Jpm_isolated.push_back(xm);
  }

  // J0*: g'' crossing zero where g and H do not vanish.
  if (g2s > 0.0) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (m0[i] || m0[i + 1]) continue;
      if (is_zero(g2[i], g2s) || is_zero(g2[i + 1], g2s)) continue;
      if ((g2[i] < 0) == (g2[i + 1] < 0)) continue;
      const double z = bisect_root(m.g2, xs[i], xs[i + 1]);
      if (std::abs(m.g(z)) > kPointRel * gs && std::abs(wr.H(z)) > kPointRel * Hs)
        P.J0_isolated.push_back(z);
    }
  }

  // J_null: simple zeros of g with g' != 0 and g'' != 0.
  if (gs > 0.0) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      double z;
      if (g0[i] == 0.0) {
        z = xs[i];
      } else if (g0[i + 1] != 0.0 && (g0[i] < 0) != (g0[i + 1] < 0)) {
        z = bisect_root(m.g, xs[i], xs[i + 1]);
      } else {
        continue;
      }
      if (std::abs(m.g1(z)) > kPointRel * g1s && std::abs(m.g2(z)) > kPointRel * g2s)
        P.Jnull.push_back(z);
    }
  }

  for (const auto& I : P.Jpm)
    if (I.length() > 0.0) {
      P.boundary_pm.push_back(I.lo);
      P.boundary_pm.push_back(I.hi);
    }
  for (const auto& I : P.J0)
    if (I.length() > 0.0) {
      P.boundary_0.push_back(I.lo);
      P.boundary_0.push_back(I.hi);
    }

  // Final assumption: no vanishing at interior interval endpoints.
  P.disc_identically_zero = !P.Jpm.empty() && Ds == 0.0;
  for (const auto& I : P.Jpm) {
    bool all_zero = true;
    for (std::size_t i = 0; i < n; ++i)
      if (I.contains(xs[i]) && !is_zero(D[i], Ds)) all_zero = false;
    for (double e : {I.lo, I.hi}) {
      if (all_zero) {
        if (std::abs(wr.H(e)) <= kPointRel * Hs) {
          P.final_assumption_ok = false;
          P.diagnostics.push_back(at("H tends to 0 at an endpoint of a J+- interval", e));
        }
      } else if ((e != a && e != b) && std::abs(wr.disc(e)) <= kPointRel * Ds) {
        P.final_assumption_ok = false;
        P.diagnostics.push_back(at("H^2-G tends to 0 at an endpoint of a J+- interval", e));
      }
    }
  }
  for (const auto& I : P.J0)
    for (double e : {I.lo, I.hi})
      if (std::abs(m.g(e)) <= kPointRel * gs) {
        P.final_assumption_ok = false;
        P.diagnostics.push_back(at("g tends to 0 at an endpoint of a J0 interval", e));
      }
  if (!P.flagged.empty())
    P.diagnostics.push_back("sign undecidable at sampling resolution in " +
                            std::to_string(P.flagged.size()) + " cell(s)");
  return P;
}

}  // namespace vdc
