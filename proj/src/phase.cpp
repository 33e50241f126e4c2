#include "vdc/phase.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "vdc/errors.hpp"

namespace vdc {

ConditionMProfile make_profile(MForm form, double eps, RealFn U) {
  ConditionMProfile p;
  p.eps = eps;
  p.U = std::move(U);
  std::ostringstream os;
  os.precision(17);
  switch (form) {
    case MForm::linear:
      p.M = [eps](double x) { return eps * x; };
      p.Mprime = [eps](double) { return eps; };
      os << eps << "*x";
      break;
    case MForm::constant:
      p.M = [eps](double) { return eps; };
      p.Mprime = [](double) { return 0.0; };
      os << eps;
      break;
    case MForm::sqrt:
      p.M = [eps](double x) { return eps * std::sqrt(x); };
      p.Mprime = [eps](double x) { return 0.5 * eps / std::sqrt(x); };
      os << eps << "*sqrt(x)";
      break;
  }
  p.M_form = os.str();
  return p;
}

bool fprime_integral(const PhaseAmplitudeModel& m, double x) {
  if (m.fprime_is_integer) return (*m.fprime_is_integer)(x);
  return is_near_integer(m.f1(x));
}

NearestIntDecomp fprime_decomp(const PhaseAmplitudeModel& m, double x) {
  const double fp = m.f1(x);
  if (fprime_integral(m, x)) {
    NearestIntDecomp d;
    d.nearest = static_cast<std::int64_t>(std::llround(fp));
    d.signed_frac = 0.0;
    d.dist = 0.0;
    d.dist_star = 1.0;
    return d;
  }
  NearestIntDecomp d = nearest_decomp(fp);
  if (d.dist == 0.0) {
    // exact structure says non-integer but rounding landed on one
    d.signed_frac = std::nextafter(0.0, 1.0);
    d.dist = d.dist_star = d.signed_frac;
  }
  return d;
}

double invert_fprime(const PhaseAmplitudeModel& m, double r, double tol, bool use_analytic) {
  double lo = m.domain.lo, hi = m.domain.hi;
  const double flo = m.f1(lo), fhi = m.f1(hi);
  const double slack = tol * std::max(1.0, std::abs(r));
  if (r < flo - slack || r > fhi + slack)
    throw RangeError("invert_fprime: r = " + std::to_string(r) + " outside f'(J)", flo, fhi);
  const auto ok = [&](double x) { return std::abs(m.f1(x) - r) <= slack; };

  if (use_analytic && m.fprime_inverse) {
    const double x = std::clamp((*m.fprime_inverse)(r), lo, hi);
    if (ok(x)) return x;
  }
  if (r <= flo) return lo;
  if (r >= fhi) return hi;

  double x = 0.5 * (lo + hi);
  for (int i = 0; i < 80; ++i) {
    x = 0.5 * (lo + hi);
    const double v = m.f1(x) - r;
    if (v == 0.0) return x;
    if (v < 0.0)
      lo = x;
    else
      hi = x;
    if (hi - lo <= 1e-3 * std::max(1.0, std::abs(x)) && ok(x)) break;
  }
  for (int i = 0; i < 8; ++i) {
    const double v = m.f1(x) - r;
    if (std::abs(v) <= 0.25 * slack) break;
    double xn = x - v / m.f2(x);
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
    if (m.f1(xn) - r < 0.0)
      lo = xn;
    else
      hi = xn;
    x = xn;
  }
  return x;
}

namespace {

// Richardson-extrapolated central difference of fn at x.
template <class Fn>
double central_diff(const Fn& fn, double x, double h) {
  const auto d = [&](double hh) {
    return static_cast<double>((static_cast<long double>(fn(x + hh)) -
                                static_cast<long double>(fn(x - hh))) /
                               (2.0L * hh));
  };
  return (4.0 * d(0.5 * h) - d(h)) / 3.0;
}

}  // namespace

ModelCheck validate_model(const PhaseAmplitudeModel& m, int n, std::uint64_t seed) {
  ModelCheck out;
  std::mt19937_64 rng(seed);
  const double lo = m.domain.lo, hi = m.domain.hi;
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const bool logscale = lo > 0.0 && hi / lo > 100.0;

  struct Pair {
    const char* name;
    std::function<long double(double)> lower;
    const RealFn* upper;
  };
  const std::vector<Pair> pairs = {
      {"f/f'", [&](double x) { return m.f(x); }, &m.f1},
      {"f'/f''", [&](double x) { return m.f1(x); }, &m.f2},
      {"f''/f'''", [&](double x) { return m.f2(x); }, &m.f3},
      {"f'''/f''''", [&](double x) { return m.f3(x); }, &m.f4},
      {"g/g'", [&](double x) { return m.g(x); }, &m.g1},
      {"g'/g''", [&](double x) { return m.g1(x); }, &m.g2},
      {"g''/g'''", [&](double x) { return m.g2(x); }, &m.g3},
  };

  double prev_fp = -INFINITY;
  std::vector<double> xs;
  for (int i = 0; i < n; ++i) {
    const double u = uni(rng);
    xs.push_back(logscale && (i % 2 == 1) ? lo * std::pow(hi / lo, u) : lo + u * (hi - lo));
  }
  std::sort(xs.begin(), xs.end());
  for (double x : xs) {
    const double h = std::min(1e-3 * std::max(1.0, std::abs(x)), 1e-2);
    if (x - h < lo || x + h > hi) continue;
    if (!(m.f2(x) > 0.0)) out.fpp_positive = false;
    const double fp = m.f1(x);
    if (fp < prev_fp) out.fp_increasing = false;
    prev_fp = fp;
    for (const auto& p : pairs) {
      const double a = (*p.upper)(x);
      const double fd = central_diff(p.lower, x, h);
      const double nb = std::max(std::abs((*p.upper)(std::max(lo, x - 100 * h))),
                                 std::abs((*p.upper)(std::min(hi, x + 100 * h))));
      const double denom = std::max({std::abs(a), std::abs(fd), 1e-3 * nb, 1e-300});
      const double rel = std::abs(a - fd) / denom;
      if (rel > out.worst_rel_error) {
        out.worst_rel_error = rel;
        out.worst_pair = p.name;
        out.worst_at = x;
      }
    }
  }
  return out;
}

}  // namespace vdc
