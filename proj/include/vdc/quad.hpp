#pragma once

#include <cstdint>
#include <functional>

#include "vdc/numutil.hpp"
#include "vdc/phase.hpp"

namespace vdc {

struct QuadResult {
  cplx value{0.0, 0.0};
  double abs_error_estimate = 0.0;
  std::int64_t panels = 0;
  bool converged = true;
};

struct RealQuadResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  std::int64_t panels = 0;
  bool converged = true;
};

// int_alpha^beta g(x) e(f(x) - r x) dx. Pre-split so the phase moves at most
// one turn per panel, then adaptive Gauss-Kronrod 7/15 on each panel.
QuadResult oscillatory_integral(const PhaseAmplitudeModel& m, double r, double alpha, double beta,
                                double tol, std::int64_t panel_cap = 4'000'000);

// Adaptive G7/K15 for smooth real integrands.
RealQuadResult adaptive_integral(const std::function<double(double)>& fn, double a, double b,
                                 double rel_tol = 1e-10, double abs_tol = 0.0,
                                 std::int64_t panel_cap = 100'000);

// int_a^inf fn over dyadic blocks [a + w 2^k, a + w 2^{k+1}]; stops once the
// integrand has fallen below rel_cutoff * peak and block contributions decay
// monotonically, then bounds the remainder by the geometric tail of the last
// block ratio.
struct TailIntegral {
  double value = 0.0;
  double remainder_bound = 0.0;
  double horizon = 0.0;
  bool monotone_tail = false;
  bool converged = false;
};
TailIntegral integrate_to_infinity(const std::function<double(double)>& fn, double a,
                                   double first_width = 1.0, double rel_cutoff = 1e-16,
                                   int max_blocks = 400);

// F(u) = int_0^u e(x^2/2) dx.
cplx fresnel_modified(double u);

enum class Side { left, right };

struct StationaryPhaseEstimate {
  double xr = 0.0;
  cplx main_term{0.0, 0.0};       // g(c) e(F(c)+1/8) / (2 sqrt f''(c))
  cplx explicit_terms{0.0, 0.0};  // all explicit terms including main_term
  double error_bound = 0.0;       // implicit constant 1
};

// Explicit stationary-phase terms of int_mu^{x_r} (left) or int_{x_r}^mu (right)
// of g(x) e(f(x) - r x), with the bound
// U/(f''^2 |x_r - mu|^3) + U/(f''^{3/2} M^2) evaluated at x_r.
StationaryPhaseEstimate stationary_phase_estimate(const PhaseAmplitudeModel& m,
                                                  const ConditionMProfile& p, double r, Side side,
                                                  double mu);

struct DerivativeTestBounds {
  double kappa = 0.0;       // min |f' - r| on the interval (0 if a stationary point is inside)
  double lambda = 0.0;      // min f'' on the interval
  double variation = 0.0;   // total variation of g plus max |g|
  double first = 0.0;       // V/(pi kappa), infinite with a stationary point inside
  double second = 0.0;      // 4V/sqrt(pi lambda)
  double first_M = 0.0;     // U(x)/min|f' - r|, x the interval midpoint
  double second_M = 0.0;    // U(x)/sqrt(f''(x))
  bool stationary_inside = false;
};

DerivativeTestBounds derivative_test_bounds(const PhaseAmplitudeModel& m,
                                            const ConditionMProfile& p, double alpha, double beta,
                                            double r);

}  // namespace vdc
