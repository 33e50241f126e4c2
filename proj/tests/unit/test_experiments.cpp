#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "support.hpp"
#include "vdc/experiments.hpp"
#include "vdc/expsum.hpp"

using namespace vdc;
using testsupport::close;

TEST_CASE("regime 1 is exact square detection") {
  CHECK(example_is_regime1(120000));
  CHECK(example_is_regime1(30000));
  CHECK_FALSE(example_is_regime1(30001));
  CHECK_FALSE(example_is_regime1(12 * 99 * 99 + 12));
  CHECK(example_regimes(30000).regime == 1);
}

TEST_CASE("regime of N = 30001") {
  const auto R = example_regimes(30001);
  const double d = nearest_decomp(std::sqrt(30001.0 / 12.0)).dist;
  CHECK(R.dist == doctest::Approx(d));
  CHECK(R.regime == (d <= std::pow(12.0 * 30001.0, -0.25) ? 2 : 3));
  CHECK(std::abs(R.residual) <= R.paper_bound);
}

TEST_CASE("batch agrees with single reports") {
  const std::vector<std::int64_t> Ns{30001, 120000, 15000, 77777};
  const auto B = example_regimes_batch(Ns);
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    const auto S = example_regimes(Ns[i]);
    CHECK(B[i].N == Ns[i]);
    CHECK(B[i].regime == S.regime);
    CHECK(close(B[i].delta, S.delta) < 1e-9);
  }
}

TEST_CASE("measured remainder is independent of the summation route") {
  const std::int64_t N = 3000;
  const auto R = example_regimes(N);
  const auto P = builtin_family(Family::power, {}, Interval{1.0, 4000.0});
  cplx lhs = direct_starred_sum(P.model, 1.0, static_cast<double>(N));
  cplx rhs = 0;
  const double top = std::sqrt(N / 12.0);
  for (int r = 1; r <= top; ++r) rhs += std::sqrt(24.0 * r) * expi_turns(-4.0 * r * r * r + 0.125);
  CHECK(close(R.delta, lhs - rhs) < 1e-8);
}

TEST_CASE("inverse-k fit recovers a synthetic constant") {
  std::vector<std::int64_t> ks;
  std::vector<cplx> v;
  const cplx c0(0.168, -0.320);
  for (std::int64_t k = 20; k <= 60; ++k) {
    ks.push_back(k);
    v.push_back(c0 + 1.0 / static_cast<double>(k));
  }
  const auto E = fit_inverse_k(ks, v);
  CHECK(close(E.c, c0) < 1e-12);
  CHECK(close(E.slope, 1.0) < 1e-10);
  CHECK(E.cauchy);
}

TEST_CASE("fitted constant is self-consistent across windows") {
  const auto lo = estimate_c(50, 60), hi = estimate_c(90, 100);
  const double agree = close(lo.c, hi.c);
  CHECK(agree <= 2.0 * (lo.residual + hi.residual) + 1e-4);
}

TEST_CASE("quadratic reciprocity bound examples") {
  const auto A = ck_quadratic(0.7, 2);
  CHECK(A.N == 3);
  CHECK(A.bound == doctest::Approx(3.14 * (3.0 - 2.0 / 0.7)));
  CHECK(A.pass);
  const auto B = ck_quadratic(-0.7, 2);
  CHECK(B.pass);
  CHECK(close(B.lhs_sum, std::conj(A.lhs_sum)) < 1e-14);
  CHECK_THROWS_AS(ck_quadratic(1.2, 2), ParameterError);
}

TEST_CASE("quadratic reciprocity bound, random sweep") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> W(0.05, 0.95);
  std::uniform_int_distribution<int> Nn(1, 50), S(0, 1);
  for (int i = 0; i < 200; ++i) {
    const double w = (S(rng) ? 1.0 : -1.0) * W(rng);
    CHECK(ck_quadratic(w, Nn(rng)).pass);
  }
}

TEST_CASE("first-derivative bound with a slow quadratic") {
  const double q[] = {0.001, 0.0};
  const auto Q = builtin_family(Family::quadratic, q, Interval{200.0, 400.0});
  const auto R = kusmin_landau_compare(Q.model, 200.0, 400.0);
  CHECK(R.cot_bound == doctest::Approx(1.0 / std::tan(0.1 * kPi)).epsilon(1e-3));
  CHECK(R.classical_ok);
  CHECK(R.residual < R.cot_bound);
}

TEST_CASE("linear phase: endpoint formula is the geometric series") {
  const auto m = testsupport::poly_model(0.3, 0.0, 0.0, {0.0, 40.0});
  const auto R = kusmin_landau_compare(m, 0.0, 40.0, 1e-12);
  cplx closed = 0;
  const cplx z = expi_turns(0.3);
  closed = (std::pow(z, 41) - 1.0) / (z - 1.0) - 0.5 * (1.0 + std::pow(z, 40));
  CHECK(close(R.starred_sum, closed) < 1e-12);
  CHECK(R.residual_full < 1e-9);
  CHECK_THROWS_AS(kusmin_landau_compare(testsupport::poly_model(1.0, 0, 0, {0, 5}), 0.0, 5.0),
                  ParameterError);
}

TEST_CASE("conjugate monomial pairs") {
  const auto A = ik_experiment(2.0, 2.0, 100.0, 1e4);
  CHECK(A.M == 100.0);
  CHECK(A.scale == doctest::Approx(0.2));
  const auto B = ik_experiment(1.5, 4.0, 100.0, 1e4);
  CHECK(B.beta == doctest::Approx(3.0));
  CHECK(B.mu == doctest::Approx(2.0));
  CHECK(std::isfinite(B.ratio));
  CHECK_THROWS_AS(ik_experiment(2.0, 2.0, 200.0, 1e4), ParameterError);
}

TEST_CASE("Poisson partial sums approach the direct sum") {
  const double q[] = {0.37};
  const auto Q = builtin_family(Family::quadratic, q, Interval{0.0, 30.0});
  const std::vector<std::int64_t> Rs{16, 32, 64};
  const auto P = poisson_check(Q.model, 0.0, 30.0, Rs);
  REQUIRE(P.rows.size() == 3);
  CHECK(P.rows[2].error < P.rows[0].error);
  CHECK(P.all_ok);
}

TEST_CASE("log-log slope") {
  const std::vector<double> x{1, 2, 4, 8}, y{1, 0.125, 1.0 / 64, 1.0 / 512};
  CHECK(loglog_slope(x, y) == doctest::Approx(-3.0));
}
