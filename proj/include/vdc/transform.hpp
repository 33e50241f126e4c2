#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vdc/errbudget.hpp"
#include "vdc/phase.hpp"

namespace vdc {

// An endpoint contribution is either an explicit value or only a magnitude
// bound; `bound` may also be non-zero next to an explicit value when the
// formula carries its own O-term.
enum class TermKind { explicit_value, bound };

struct TaggedTerm {
  TermKind kind = TermKind::explicit_value;
  cplx value{0.0, 0.0};
  double bound = 0.0;
  std::string regime;
  bool is_explicit() const { return kind == TermKind::explicit_value; }
};

struct EndpointTerm {
  TaggedTerm circ;  // D-circle
  TaggedTerm star;  // D-star
  cplx explicit_value() const {
    return (circ.is_explicit() ? circ.value : cplx{}) + (star.is_explicit() ? star.value : cplx{});
  }
  double bound() const { return circ.bound + star.bound; }
};

struct DualTerm {
  std::int64_t r = 0;
  double xr = 0.0;
  double weight = 1.0;
  cplx value{0.0, 0.0};  // weight already applied
  bool ok = true;
  std::string error;
};

struct TransformResult {
  cplx rhs_main{0.0, 0.0};
  EndpointTerm D_a, D_b;
  std::int64_t r_lo = 0, r_hi = -1;
  std::vector<DualTerm> terms;
  int failed_terms = 0;
  std::optional<cplx> lhs;
  std::optional<cplx> measured_delta;
};

// sum*_{f'(a)<=r<=f'(b)} g(x_r) e(f(x_r) - r x_r + 1/8) / sqrt(f''(x_r))
TransformResult rhs_main_sum(const PhaseAmplitudeModel& m, double a, double b);

EndpointTerm endpoint_term(const PhaseAmplitudeModel& m, const ConditionMProfile& p, double mu,
                           Endpoint which, double psi_tol = 1e-8);

struct RefinedEndpoint {
  TaggedTerm d0;
  double residual_bound = 0.0;
  double C = 0.0, L = 0.0;
  double eps = 0.0, eps_prime = 0.0;
  std::string regime;
  double total_bound() const { return d0.bound + residual_bound; }
};

// D0 plus the residual bound for given (C, L).
RefinedEndpoint refined_endpoint_term(const PhaseAmplitudeModel& m, const ConditionMProfile& p,
                                      double mu, double C, double L);

// Optimised form for integral f'(mu) and M(mu) <= f''(mu)^7.
RefinedEndpoint optimized_refined_endpoint_term(const PhaseAmplitudeModel& m,
                                                const ConditionMProfile& p, double mu);

// Endpoint term of the short-interval form with constants T, M, U.
TaggedTerm short_interval_endpoint_term(const PhaseAmplitudeModel& m, double mu, double T,
                                        double M, double U, double psi_tol = 1e-8);

struct TransformOptions {
  bool measure_delta = true;
  bool with_budget = true;
  bool allow_alternate = true;
  double psi_tol = 1e-8;
  int condition_grid = 64;
  int partition_samples = 4096;
};

struct FullTransform {
  TransformResult result;
  ErrorBudget budget;
  ConditionMReport condition;
  AssumptionPartition partition;
  std::vector<std::string> diagnostics;
};

FullTransform full_transform(const PhaseAmplitudeModel& m, const ConditionMProfile& p, double a,
                             double b, const TransformOptions& opt = {});

}  // namespace vdc
