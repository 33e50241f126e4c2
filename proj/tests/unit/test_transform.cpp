#include <cmath>

#include "doctest.h"
#include "support.hpp"
#include "vdc/experiments.hpp"
#include "vdc/expsum.hpp"
#include "vdc/transform.hpp"

using namespace vdc;
using testsupport::close;

TEST_CASE("dual sum of the power family on [1, 1200]") {
  const auto P = builtin_family(Family::power, {}, Interval{1.0, 1200.0});
  const auto R = rhs_main_sum(P.model, 1.0, 1200.0);
  CHECK(R.r_lo == 1);
  CHECK(R.r_hi == 10);
  REQUIRE(R.terms.size() == 10);
  ComplexAccumulator acc;
  for (const auto& t : R.terms) {
    const double r = static_cast<double>(t.r);
    const cplx expect = std::sqrt(24.0 * r) * expi_turns(-4.0 * r * r * r + 0.125);
    CHECK(t.weight == (t.r == 10 ? 0.5 : 1.0));
    CHECK(close(t.value, t.weight * expect) < 1e-10);  // value carries the weight
    acc.add(t.value);
  }
  CHECK(close(R.rhs_main, acc.value()) < 1e-12);
}

TEST_CASE("dual term at an integral endpoint is halved") {
  const auto P = builtin_family(Family::power, {}, Interval{1.0, 12.0});
  const auto R = rhs_main_sum(P.model, 1.0, 12.0);
  REQUIRE(R.terms.size() == 1);
  CHECK(close(R.rhs_main, 0.5 * std::sqrt(24.0) * expi_turns(-4.0 + 0.125)) < 1e-10);
}

TEST_CASE("quadratic transform within its budget") {
  const double q[] = {0.37};
  const auto Q = builtin_family(Family::quadratic, q, Interval{0.0, 100.0});
  const auto F = full_transform(Q.model, Q.profile, 0.0, 100.0);
  REQUIRE(F.result.lhs);
  CHECK(close(*F.result.lhs, direct_starred_sum(Q.model, 0.0, 100.0)) == 0.0);
  REQUIRE(F.result.measured_delta);
  CHECK(std::abs(*F.result.measured_delta) <= F.budget.total());
}

TEST_CASE("endpoint term, non-integral f' below the distance") {
  const auto P = builtin_family(Family::power, {}, Interval{1.0, 1200.0});
  const double N = 1083.0;  // f'(N) = 9.5
  const auto D = endpoint_term(P.model, P.profile, N, Endpoint::b, 1e-10);
  const double eps = -0.5;
  const cplx E = expi_turns(std::pow(N / 3.0L, 1.5L));
  const cplx expect = E * (-1.0 / (cplx(0, kTwoPi) * eps) + modified_sawtooth(N, eps, 1e-12));
  CHECK(D.circ.is_explicit());
  CHECK(close(D.circ.value, expect) < 1e-9);
  CHECK(close(D.star.value, 0.0) == 0.0);
}

TEST_CASE("endpoint term, integral f'") {
  const auto P = builtin_family(Family::power, {}, Interval{1.0, 1200.0});
  const double N = 1200.0;  // f'(N) = 10
  const auto D = endpoint_term(P.model, P.profile, N, Endpoint::b);
  const cplx E = expi_turns(std::pow(N / 3.0L, 1.5L));
  const double f2 = P.model.f2(N), f3 = P.model.f3(N);
  CHECK(close(D.star.value, f3 * E / (cplx(0, 6.0 * kPi) * f2 * f2)) < 1e-12);
  CHECK(close(D.circ.value, 0.0) < 1e-12);
}

TEST_CASE("endpoint term when f'' >= 1 is only bounded") {
  const double q[] = {1.5};
  const auto Q = builtin_family(Family::quadratic, q, Interval{0.0, 20.0});
  const auto D = endpoint_term(Q.model, Q.profile, 3.3, Endpoint::a);
  CHECK_FALSE(D.circ.is_explicit());
  const double M = 20.0;
  CHECK(D.bound() == doctest::Approx(1.0 + 1.0 / M + 1.0 / (std::sqrt(1.5) * M)));
}

TEST_CASE("refined endpoint, integral f' and integral endpoint") {
  const double q[] = {16.0};
  const auto Q = builtin_family(Family::quadratic, q, Interval{0.0, 20.0});
  const auto R = refined_endpoint_term(Q.model, Q.profile, 10.0, 0.5, 5.0);
  CHECK(R.regime == "integral");
  CHECK(R.d0.is_explicit());
  CHECK(close(R.d0.value, 0.0) == 0.0);
}

TEST_CASE("refined endpoint, endpoint far from an integer") {
  const double q[] = {16.0};
  const auto Q = builtin_family(Family::quadratic, q, Interval{0.0, 20.0});
  const double mu = 10.4375;  // f' = 167, eps = 0.4375
  const auto R = refined_endpoint_term(Q.model, Q.profile, mu, 0.3, 4.5);
  CHECK(R.regime == "integral_far");
  CHECK(R.d0.bound == doctest::Approx(1.0 / ((0.4375 - 0.3) * 4.0)));
  CHECK_THROWS_AS(refined_endpoint_term(Q.model, Q.profile, mu, 0.1, 4.5), RangeError);
  CHECK_THROWS_AS(refined_endpoint_term(Q.model, Q.profile, mu, 0.3, 100.0), RangeError);
}

TEST_CASE("optimised refinement picks the balanced length") {
  const auto E = builtin_family(Family::exponential, {});
  const auto p = make_profile(MForm::constant, 1.0, testsupport::one());
  const double mu = std::log(50.0);
  const auto R = optimized_refined_endpoint_term(E.model, p, mu);
  CHECK(R.L == doctest::Approx(std::pow(50.0, 8.0 / 15.0)));
}

TEST_CASE("empty sums give an empty transform") {
  const double q[] = {0.1};
  const auto Q = builtin_family(Family::quadratic, q, Interval{0.2, 0.8});
  const auto R = rhs_main_sum(Q.model, 0.2, 0.8);
  CHECK(R.terms.empty());
  CHECK(close(R.rhs_main, 0.0) == 0.0);
  CHECK(close(direct_starred_sum(Q.model, 0.2, 0.8), 0.0) == 0.0);
}

TEST_CASE("short-interval endpoint term at an integral f'") {
  const auto P = builtin_family(Family::power, {}, Interval{1.0, 1e4});
  const auto t = short_interval_endpoint_term(P.model, 1200.0, 1e3, 600.0, 1.0);
  CHECK(t.is_explicit());
  const auto u = short_interval_endpoint_term(P.model, 1083.0, 1e3, 600.0, 1.0);
  CHECK(std::isfinite(u.bound));
}

TEST_CASE("monomial transform remainder scales like the corollary") {
  const auto R = ik_experiment(2.0, 4.0, 400.0, 400.0 * 400.0);
  CHECK(R.M == doctest::Approx(400.0));
  CHECK(R.ratio < 1.0);
}
