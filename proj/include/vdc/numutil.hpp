#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <span>

#include "vdc/errors.hpp"

namespace vdc {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// sup |psi_R(x, eps) - psi(x, eps)| / min(1, 1/(R ||x||*)) measured by brute force
// over x in [0.001, 0.999] (53 pts), eps in [-1/2, 1/2] (21 pts), R = 1..2048.
// The measured supremum was 0.5919; truncation decisions use twice this value.
inline constexpr double kFourierTailConstant = 0.592;

// Relative tolerance for deciding that a floating value is an integer.
inline constexpr double kIntegerTolerance = 1e-9;

struct NearestIntDecomp {
  std::int64_t nearest = 0;  // [[x]], ties toward +inf
  double signed_frac = 0.0;  // <x> in [-1/2, 1/2)
  double dist = 0.0;         // ||x||
  double dist_star = 1.0;    // ||x||*, 1 at integers
};

NearestIntDecomp nearest_decomp(double x);

double frac(double x);           // {x} in [0, 1)
double sawtooth_s(double x);     // s(x) = {x} - 1/2
double sawtooth_psi(double x);   // s(x) off the integers, 0 on them
bool is_near_integer(double x, double rel = kIntegerTolerance);

// e(x) = exp(2 pi i x) after reducing x modulo 1.
cplx expi_turns(double x);
cplx expi_turns(long double x);

// Neumaier-compensated complex sum.
class ComplexAccumulator {
 public:
  void add(cplx z) {
    add_component(sum_re_, comp_re_, z.real());
    add_component(sum_im_, comp_im_, z.imag());
    ++count_;
  }
  ComplexAccumulator& operator+=(cplx z) {
    add(z);
    return *this;
  }
  // Folds a partial sum (value plus its own compensation) into this one.
  void merge(cplx partial_sum, cplx partial_comp, std::int64_t n) {
    add_component(sum_re_, comp_re_, partial_sum.real());
    add_component(sum_im_, comp_im_, partial_sum.imag());
    add_component(sum_re_, comp_re_, partial_comp.real());
    add_component(sum_im_, comp_im_, partial_comp.imag());
    count_ += n;
  }
  void merge(const ComplexAccumulator& o) { merge(o.raw_sum(), o.compensation(), o.count()); }

  cplx value() const { return {sum_re_ + comp_re_, sum_im_ + comp_im_}; }
  cplx raw_sum() const { return {sum_re_, sum_im_}; }
  cplx compensation() const { return {comp_re_, comp_im_}; }
  std::int64_t count() const { return count_; }

 private:
  static void add_component(double& s, double& c, double v) {
    const double t = s + v;
    if (std::abs(s) >= std::abs(v))
      c += (s - t) + v;
    else
      c += (v - t) + s;
    s = t;
  }

  double sum_re_ = 0.0, sum_im_ = 0.0;
  double comp_re_ = 0.0, comp_im_ = 0.0;
  std::int64_t count_ = 0;
};

// Compensated sum with the first/last weight halved when the matching limit
// is an integer. A one-element sequence with both limits integral is the
// degenerate interval a = b and sums to zero.
cplx starred_sum(std::span<const cplx> weights, bool first_is_integer_limit,
                 bool last_is_integer_limit);

// psi(x, eps) = -(1/2 pi i) lim sum_{0<|r|<R} e(rx)/(r + eps).
// The 1/r, 1/r^2, 1/r^3 parts are summed in closed form via Bernoulli
// polynomials and only the O(r^-4) remainder is summed explicitly.
cplx modified_sawtooth(double x, double eps, double tol = 1e-12);

// Literal symmetric partial sum over 0 < |r| < R (pairs r, -r, ascending |r|).
cplx modified_sawtooth_partial(double x, double eps, std::int64_t R);

// Partial-sum route with R chosen from the fitted tail bound
// 2 * kFourierTailConstant * min(1, 1/(R ||x||*)) <= tol.
// Throws AccuracyError when R would exceed r_cap.
cplx modified_sawtooth_direct(double x, double eps, double tol,
                              std::int64_t r_cap = 50'000'000);

// Tail magnitude of the partial sum at truncation R with the fitted constant.
double fourier_tail_bound(double x, std::int64_t R);

}  // namespace vdc
