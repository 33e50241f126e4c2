#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vdc/phase.hpp"
#include "vdc/quad.hpp"

namespace vdc {

// ---- sum*_{1<=n<=N} e((n/3)^{3/2}) against its dual sum ---------------------

struct ExampleReport {
  std::int64_t N = 0;
  int regime = 0;         // 1, 2 or 3
  double dist = 0.0;      // ||sqrt(N/12)||
  double signed_frac = 0.0;
  double threshold = 0.0;  // (12N)^{-1/4}
  cplx lhs{}, rhs{}, delta{};
  cplx predicted{};        // explicit term of the regime (the constant excluded)
  cplx residual{};         // delta - predicted - c (c only when supplied)
  bool c_subtracted = false;
  double paper_bound = 0.0;
  double seconds = 0.0;
};

// N = 12 k^2 exactly, decided in integer arithmetic.
bool example_is_regime1(std::int64_t N);

ExampleReport example_regimes(std::int64_t N, std::optional<cplx> c = std::nullopt);

// Same reports for many N in one pass over n (Ns need not be sorted).
std::vector<ExampleReport> example_regimes_batch(std::span<const std::int64_t> Ns,
                                                 std::optional<cplx> c = std::nullopt);

struct ConstantEstimate {
  cplx c{};
  cplx slope{};          // coefficient of 1/k
  double residual = 0.0;  // max |delta_k - fit|
  std::vector<std::int64_t> ks;
  std::vector<cplx> deltas;
  bool cauchy = true;
  std::string diagnostic;
};

// delta at N = 12k^2 fitted by c + beta/k over k_min..k_max.
ConstantEstimate estimate_c(std::int64_t k_min, std::int64_t k_max, double residual_limit = 0.05);
ConstantEstimate fit_inverse_k(std::span<const std::int64_t> ks, std::span<const cplx> values,
                               double residual_limit = 0.05);

// ---- quadratic reciprocity bound -------------------------------------------

struct CKReport {
  double omega = 0.0;
  std::int64_t n = 0;
  std::int64_t N = 0;  // [[n/omega]]
  cplx lhs_sum{}, rhs_sum{};
  double difference = 0.0;
  double bound = 0.0;  // 3.14 |N - n/omega|
  bool pass = false;
};
CKReport ck_quadratic(double omega, std::int64_t n, double C = 3.14);

// ---- Kusmin-Landau -------------------------------------------------------------

struct KLReport {
  double theta = 0.0;
  cplx starred_sum{}, plain_sum{};
  double cot_bound = 0.0;
  bool classical_ok = false;
  double inv_pi_theta = 0.0;
  bool corollary_applicable = false;
  cplx explicit_value{};   // endpoint reciprocals only
  double residual = 0.0;
  double corollary_bound = 0.0;
  cplx full_prediction{};  // with the psi terms of the endpoint formula
  double residual_full = 0.0;
  double T = 0.0, M = 0.0;
};
KLReport kusmin_landau_compare(const PhaseAmplitudeModel& m, double a, double b,
                               double psi_tol = 1e-8);

// ---- Iwaniec-Kowalski pair ----------------------------------------------------

struct IKReport {
  double alpha = 0.0, beta = 0.0, nu = 0.0, mu = 0.0;
  double N = 0.0, X = 0.0, M = 0.0;
  cplx lhs{}, rhs{}, delta{};
  cplx rhs_transform{};  // dual sum rebuilt from the generic transform
  double scale = 0.0;    // N^{-1/2} + M^{-1/2}
  double ratio = 0.0;    // |delta| / scale
};
IKReport ik_experiment(double alpha, double nu, double N, double X);

// ---- Poisson partial sums ------------------------------------------------------

struct PoissonRow {
  std::int64_t R = 0;
  cplx partial{};
  double error = 0.0;
  double tail_estimate = 0.0;
  bool ok = false;
};
struct PoissonReport {
  cplx direct{};
  std::vector<PoissonRow> rows;
  bool all_ok = true;
};
PoissonReport poisson_check(const PhaseAmplitudeModel& m, double a, double b,
                            std::span<const std::int64_t> Rs, double tol = 1e-11);

// ---- stationary phase sweep ------------------------------------------------------

struct StationaryPhaseRow {
  double offset = 0.0;
  cplx oracle{}, estimate{};
  double residual = 0.0;
  double bound = 0.0;
};
struct StationaryPhaseSweep {
  std::vector<StationaryPhaseRow> rows;
  double slope = 0.0;  // least squares of log residual against log offset
};
StationaryPhaseSweep stationary_phase_sweep(const PhaseAmplitudeModel& m,
                                            const ConditionMProfile& p, double r, Side side,
                                            std::span<const double> offsets, double tol = 1e-12);

// least-squares slope of log y against log x
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace vdc
