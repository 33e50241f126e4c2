#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vdc/numutil.hpp"

namespace vdc {

using RealFn = std::function<double(double)>;
using PhaseFn = std::function<long double(long double)>;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return x >= lo && x <= hi; }
  double length() const { return hi - lo; }
};

// Phase f (with four derivatives) and amplitude g (with three) on a closed
// interval. f is evaluated in long double so that f(n) mod 1 survives large n.
struct PhaseAmplitudeModel {
  std::string name;
  PhaseFn f;
  RealFn f1, f2, f3, f4;
  RealFn g, g1, g2, g3;
  Interval domain;
  std::optional<RealFn> fprime_inverse;
  // Exact value of (f(x_r) - r x_r) mod 1 for integer r, when known.
  std::optional<std::function<double(std::int64_t)>> dual_phase_turns;
  // Exact decision "f'(x) is an integer", when the family has that structure.
  std::optional<std::function<bool(double)>> fprime_is_integer;
};

struct ConditionMConstants {
  double C2 = 2.0, C2minus = 2.0, C4 = 2.0;
  double D0 = 2.0, D1 = 2.0, D2 = 2.0;
  double delta = 0.5;
  double eta() const { return 3.0 * delta / C2minus; }
};

struct ConditionMProfile {
  RealFn M, Mprime, U;
  ConditionMConstants k;
  std::string M_form;  // human-readable form of M, e.g. "0.5*x"
  double eps = 0.0;
  bool verified = false;  // set by the family epsilon search
};

enum class MForm { linear, constant, sqrt };

ConditionMProfile make_profile(MForm form, double eps, RealFn U);

enum class Family {
  power,        // f = (x/3)^{3/2}, g = 1
  quadratic,    // f = omega x^2/2 + beta x, g = 1
  ik_monomial,  // f = (X/alpha)(x/N)^alpha, g = (alpha/x)^{1/2}
  exponential,  // f = alpha beta^x, g = 1
  zeta_log,     // f = -t log(x)/(2 pi), g = x^{-sigma} (conjugate of n^{-s})
  oscillatory,  // f = alpha x^2 + beta sin(gamma x)/x, g = 1
  power_sine,   // f = (x/3)^{3/2}, g = sin(kappa x) + shift
  cubic_dual,   // f = 4x^3, g = (24x)^{1/2}: conjugate of the power family's dual sum
};

Family parse_family(std::string_view name);
const char* family_name(Family f);
Interval default_domain(Family f, std::span<const double> params);

struct FamilyInstance {
  PhaseAmplitudeModel model;
  ConditionMProfile profile;
};

FamilyInstance builtin_family(Family family, std::span<const double> params,
                              std::optional<Interval> domain = std::nullopt);

// x_r with |f'(x_r) - r| <= tol*max(1,|r|).
double invert_fprime(const PhaseAmplitudeModel& m, double r, double tol = 1e-13,
                     bool use_analytic = true);

bool fprime_integral(const PhaseAmplitudeModel& m, double x);
NearestIntDecomp fprime_decomp(const PhaseAmplitudeModel& m, double x);

struct ModelCheck {
  double worst_rel_error = 0.0;  // over all derivative pairs
  std::string worst_pair;
  double worst_at = 0.0;
  bool fpp_positive = true;
  bool fp_increasing = true;
};

// Central-difference audit at n points (deterministic pseudo-random in the domain).
ModelCheck validate_model(const PhaseAmplitudeModel& m, int n, std::uint64_t seed = 1);

}  // namespace vdc
