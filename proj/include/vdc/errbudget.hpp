#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vdc/phase.hpp"

namespace vdc {

// ---- condition (M) ----------------------------------------------------------

struct ConditionMViolation {
  std::string inequality;
  double x = 0.0, z = 0.0;
  double lhs = 0.0, rhs = 0.0;
};

struct ConditionMWorst {
  std::string inequality;
  double ratio = 0.0;  // lhs/rhs, <= 1 means satisfied
  double x = 0.0, z = 0.0;
};

struct ConditionMReport {
  bool pass = false;
  bool part1 = false;  // max(M(a), M(b)) <= b - a
  bool part2 = false;  // delta < 1, eta < 2
  bool part3 = false;  // f, g and derivatives finite on J
  bool part4 = false;  // pointwise inequalities
  Interval J;
  int c_a = 0, c_b = 0;
  int grid = 0;
  int z_samples = 64;
  std::vector<ConditionMWorst> worst;           // one row per inequality
  std::vector<ConditionMViolation> violations;  // first 64 only
  std::int64_t violation_count = 0;
  std::vector<std::string> notes;
};

inline constexpr const char* kConditionMInequalities[] = {
    "f2_lower", "f2_upper", "f3", "f4", "g0", "g1", "g2"};

ConditionMReport check_condition_M(const PhaseAmplitudeModel& m, const ConditionMProfile& p,
                                   double a, double b, int grid = 64);

// ---- endpoint quantities ----------------------------------------------------

// #(Z cap (f'(mu) - f''(mu), f'(mu) + f''(mu)) minus {f'(mu)})
std::int64_t m_count(const PhaseAmplitudeModel& m, double mu);
std::int64_t m_count_values(double fp, double fpp, bool fp_is_integer);

struct BarPoints {
  std::optional<double> abar, bbar;
};
BarPoints abar_bbar(const PhaseAmplitudeModel& m, double a, double b,
                    const ConditionMProfile& p);

enum class Endpoint { a, b };

struct EndpointDeltas {
  double delta1 = 0.0;
  double delta2 = 0.0;
  std::int64_t m = 0;
  std::string delta1_case;  // "min", "integer", "zero"
  std::string delta2_case;  // "integer_or_m", "otherwise"
};
EndpointDeltas endpoint_deltas(const PhaseAmplitudeModel& m, const ConditionMProfile& p,
                               double mu, Endpoint which, double a, double b);

struct TailDeltas {
  double delta3_a = 0.0, delta3_b = 0.0;
  double integral_a = 0.0, integral_b = 0.0;
  double boundary_a = 0.0, boundary_b = 0.0;
  bool converged = true;
};
TailDeltas tail_deltas(const PhaseAmplitudeModel& m, const ConditionMProfile& p, double a,
                       double b, const BarPoints& bars);

// ---- H, G, W, r -------------------------------------------------------------

struct WRFunctions {
  RealFn H, G, Hprime, Gprime, disc;  // disc = H^2 - G
  RealFn Wplus, Wminus, W0;
  RealFn rplus, rminus, r0;
  RealFn Wplus_prime, Wminus_prime, W0_prime;
  RealFn rplus_prime, rminus_prime, r0_prime;
  // h_r(x) = ((f'-r)g' - g f'') / (f'-r)^3
  std::function<double(double r, double x)> h;
};
WRFunctions make_wr_functions(const PhaseAmplitudeModel& m);

// ---- assumption partition ---------------------------------------------------

struct AssumptionPartition {
  Interval J;
  std::vector<Interval> Jpm, J0;
  std::vector<double> Jnull;
  std::vector<double> Jpm_isolated, J0_isolated;
  std::vector<double> boundary_pm, boundary_0;
  std::vector<Interval> flagged;  // sign undecidable at the sampling resolution
  std::vector<std::string> diagnostics;
  bool final_assumption_ok = true;
  bool disc_identically_zero = false;
  int samples = 0;
};

enum class Spacing { uniform, geometric };

AssumptionPartition partition_assumptions(const PhaseAmplitudeModel& m, double a, double b,
                                          int samples = 4096,
                                          Spacing spacing = Spacing::uniform);

// ---- delta 4 ------------------------------------------------------------------

struct KBreakdown {
  double integral = 0.0;
  double isolated = 0.0;
  double boundary = 0.0;
  int sign_changes = 0;
  double total() const { return integral + isolated + boundary; }
};

struct Delta4Breakdown {
  double smooth_integral = 0.0;
  KBreakdown K0, Kplus, Kminus;
  double jnull_sum = 0.0;
  bool alternate_used = false;
  bool converged = true;
  std::vector<std::string> diagnostics;
  double k_terms() const { return K0.total() + Kplus.total() + Kminus.total(); }
  double total() const { return smooth_integral + k_terms() + jnull_sum; }
};

// int U/(f'' M^3) (1 + sqrt(f'') M)(1 + (1 + |M'|)/(f'' M))
double smooth_delta4_integrand(const PhaseAmplitudeModel& m, const ConditionMProfile& p,
                               double x);

bool alternate_delta4_applies(const PhaseAmplitudeModel& m, const ConditionMProfile& p,
                              double a, double b);

Delta4Breakdown global_delta4(const PhaseAmplitudeModel& m, const ConditionMProfile& p,
                              const AssumptionPartition& part, double a, double b,
                              bool allow_alternate = true);

// ---- b tending to infinity ---------------------------------------------------

struct ToInfinityDeltas {
  double delta3p_b = 0.0;
  double delta4p_b = 0.0;
  double delta5 = 0.0;
  Interval Kb;
  std::optional<double> bbar;
  double delta5_integral_a = 0.0;      // first integral of Delta5
  double delta5_smooth = 0.0;          // second integral of Delta5
  double delta5_k = 0.0;               // K terms and J_null sum on [b, horizon]
  double horizon = 0.0;
  double remainder_bound = 0.0;
  bool converged = true;
};

ToInfinityDeltas toinfinity_deltas(const PhaseAmplitudeModel& m, const ConditionMProfile& p,
                                   double a, double b);

// ---- full budget ----------------------------------------------------------------

struct BudgetOptions {
  int partition_samples = 4096;
  bool allow_alternate = true;
};

struct ErrorBudget {
  EndpointDeltas end_a, end_b;
  TailDeltas tails;
  BarPoints bars;
  Delta4Breakdown delta4;
  double d_bound_a = 0.0, d_bound_b = 0.0;  // big-O endpoint regimes, filled by the transform
  std::vector<std::string> diagnostics;

  double delta1_a() const { return end_a.delta1; }
  double delta1_b() const { return end_b.delta1; }
  double delta2_a() const { return end_a.delta2; }
  double delta2_b() const { return end_b.delta2; }
  double delta3_a() const { return tails.delta3_a; }
  double delta3_b() const { return tails.delta3_b; }
  double total() const {
    return end_a.delta1 + end_b.delta1 + end_a.delta2 + end_b.delta2 + tails.delta3_a +
           tails.delta3_b + delta4.total() + d_bound_a + d_bound_b;
  }
};

ErrorBudget compute_budget(const PhaseAmplitudeModel& m, const ConditionMProfile& p, double a,
                           double b, const AssumptionPartition& part,
                           const BudgetOptions& opt = {});

}  // namespace vdc
