#include "vdc/numutil.hpp"

#include <cmath>
#include <vector>

#include "vdc/kernels.hpp"

namespace vdc {

NearestIntDecomp nearest_decomp(double x) {
  if (!std::isfinite(x)) throw ParameterError("nearest_decomp: non-finite input");
  if (std::abs(x) >= 0x1p62) throw ParameterError("nearest_decomp: |x| too large for int64");
  double n = std::floor(x);
  double r = x - n;  // exact for |x| < 2^52
  if (r >= 0.5) {
    n += 1.0;
    r -= 1.0;
  }
  NearestIntDecomp d;
  d.nearest = static_cast<std::int64_t>(n);
  d.signed_frac = r;
  d.dist = std::abs(r);
  d.dist_star = d.dist == 0.0 ? 1.0 : d.dist;
  return d;
}

double frac(double x) { return x - std::floor(x); }

double sawtooth_s(double x) { return frac(x) - 0.5; }

double sawtooth_psi(double x) {
  const double fx = frac(x);
  return fx == 0.0 ? 0.0 : fx - 0.5;
}

bool is_near_integer(double x, double rel) {
  return std::abs(x - std::nearbyint(x)) <= rel * std::max(1.0, std::abs(x));
}

cplx expi_turns(double x) {
  const double t = x - std::nearbyint(x);
  return std::polar(1.0, kTwoPi * t);
}

cplx expi_turns(long double x) {
  const double t = static_cast<double>(x - std::nearbyintl(x));
  return std::polar(1.0, kTwoPi * t);
}

cplx starred_sum(std::span<const cplx> w, bool first_int, bool last_int) {
  if (w.empty()) return {0.0, 0.0};
  if (w.size() == 1) {
    if (first_int && last_int) return {0.0, 0.0};
    return (first_int || last_int) ? 0.5 * w[0] : w[0];
  }
  ComplexAccumulator acc;
  acc.add(first_int ? 0.5 * w.front() : w.front());
  for (std::size_t i = 1; i + 1 < w.size(); ++i) acc.add(w[i]);
  acc.add(last_int ? 0.5 * w.back() : w.back());
  return acc.value();
}

namespace {

// r*x mod 1 with the low part of the product kept.
double product_turns(double r, double xf) {
  const double hi = r * xf;
  const double lo = std::fma(r, xf, -hi);
  return (hi - std::nearbyint(hi)) + lo;
}

void check_eps(double eps) {
  if (!(std::abs(eps) <= 0.5)) throw ParameterError("modified_sawtooth: need |eps| <= 1/2");
}

}  // namespace

cplx modified_sawtooth_partial(double x, double eps, std::int64_t R) {
  if (!std::isfinite(x)) throw ParameterError("modified_sawtooth: non-finite x");
  check_eps(eps);
  const double xf = frac(x);
  ComplexAccumulator acc;
  {
    kernels::CisBatch batch(acc);
    for (std::int64_t r = 1; r < R; ++r) {
      const double rd = static_cast<double>(r);
      const double t = product_turns(rd, xf);
      batch.push(1.0 / (rd + eps), t);
      batch.push(1.0 / (eps - rd), -t);
    }
  }
  return acc.value() * cplx(0.0, 1.0 / kTwoPi);  // -1/(2 pi i) = i/(2 pi)
}

double fourier_tail_bound(double x, std::int64_t R) {
  const double ds = nearest_decomp(frac(x)).dist_star;
  return kFourierTailConstant * std::min(1.0, 1.0 / (static_cast<double>(R) * ds));
}

cplx modified_sawtooth_direct(double x, double eps, double tol, std::int64_t r_cap) {
  if (!(tol > 0.0)) throw ParameterError("modified_sawtooth: tol must be positive");
  const double ds = nearest_decomp(frac(x)).dist_star;
  const double c = 2.0 * kFourierTailConstant;
  const double need = c >= tol ? std::ceil(c / (tol * ds)) : 2.0;
  if (need > static_cast<double>(r_cap))
    throw AccuracyError("modified_sawtooth: truncation cap reached",
                        c * std::min(1.0, 1.0 / (static_cast<double>(r_cap) * ds)));
  return modified_sawtooth_partial(x, eps, std::max<std::int64_t>(2, static_cast<std::int64_t>(need)));
}

cplx modified_sawtooth(double x, double eps, double tol) {
  if (!std::isfinite(x)) throw ParameterError("modified_sawtooth: non-finite x");
  if (!(tol > 0.0)) throw ParameterError("modified_sawtooth: tol must be positive");
  check_eps(eps);
  const double t = frac(x);
  const cplx I(0.0, 1.0);

  // sum_{k!=0} e(kt)/k^n = -(2 pi i)^n B_n(t)/n!
  const cplx s1 = t == 0.0 ? cplx(0.0) : -kTwoPi * I * (t - 0.5);
  const double b2 = t * t - t + 1.0 / 6.0;
  const double b3 = t * (t * (t - 1.5) + 0.5);
  const cplx s2 = 2.0 * kPi * kPi * b2;
  const cplx s3 = (4.0 / 3.0) * kPi * kPi * kPi * I * b3;

  cplx total = s1 - eps * s2 + eps * eps * s3;
  if (eps != 0.0) {
    // remainder sum e(rt)/(r^3 (r+eps)); pair tail <= 4/(3 (R-1)^3)
    const double e3 = std::abs(eps * eps * eps);
    const double need = std::cbrt(4.0 * e3 / (3.0 * kTwoPi * 0.5 * tol));
    const auto R = static_cast<std::int64_t>(std::ceil(need)) + 2;
    ComplexAccumulator acc;
    {
      kernels::CisBatch batch(acc);
      for (std::int64_t r = 1; r < R; ++r) {
        const double rd = static_cast<double>(r);
        const double r3 = rd * rd * rd;
        const double tt = product_turns(rd, t);
        batch.push(1.0 / (r3 * (rd + eps)), tt);
        batch.push(1.0 / (r3 * (rd - eps)), -tt);  // (-r)^3 (-r + eps)
      }
    }
    total -= eps * eps * eps * acc.value();
  }
  return total * cplx(0.0, 1.0 / kTwoPi);
}

}  // namespace vdc
