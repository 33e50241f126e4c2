#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "support.hpp"
#include "vdc/numutil.hpp"

using namespace vdc;
using testsupport::close;

TEST_CASE("nearest decomposition") {
  auto d = nearest_decomp(2.4);
  CHECK(d.nearest == 2);
  CHECK(d.signed_frac == doctest::Approx(0.4));
  CHECK(d.dist == doctest::Approx(0.4));
  CHECK(d.dist_star == doctest::Approx(0.4));

  d = nearest_decomp(7.0);
  CHECK(d.nearest == 7);
  CHECK(d.signed_frac == 0.0);
  CHECK(d.dist == 0.0);
  CHECK(d.dist_star == 1.0);

  d = nearest_decomp(3.5);  // ties go up
  CHECK(d.nearest == 4);
  CHECK(d.signed_frac == -0.5);
  CHECK(d.dist == 0.5);

  d = nearest_decomp(-2.5);
  CHECK(d.nearest == -2);
  CHECK(d.signed_frac == -0.5);
}

TEST_CASE("nearest decomposition invariants") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-1e6, 1e6);
  for (int i = 0; i < 2000; ++i) {
    const double x = U(rng);
    const auto d = nearest_decomp(x);
    const double back = static_cast<double>(d.nearest) + d.signed_frac;
    CHECK(std::abs(back - x) <= 4.0 * std::abs(std::nextafter(x, INFINITY) - x));
    CHECK(d.dist == std::abs(d.signed_frac));
    CHECK(d.signed_frac >= -0.5);
    CHECK(d.signed_frac < 0.5);
    CHECK(d.dist_star == (d.dist != 0.0 ? d.dist : 1.0));
  }
}

TEST_CASE("sawtooth") {
  CHECK(sawtooth_psi(0.25) == doctest::Approx(-0.25));
  CHECK(sawtooth_psi(5.0) == 0.0);
  CHECK(sawtooth_psi(-1.75) == doctest::Approx(-0.25));
  CHECK(sawtooth_s(5.0) == -0.5);
}

TEST_CASE("modified sawtooth at eps = 0 is the sawtooth") {
  CHECK(close(modified_sawtooth(0.25, 0.0, 1e-6), cplx(-0.25, 0.0)) < 1e-6);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-50.0, 50.0);
  for (int i = 0; i < 200; ++i) {
    double x = U(rng);
    if (nearest_decomp(x).dist < 1e-3) continue;
    CHECK(close(modified_sawtooth(x, 0.0, 1e-8), cplx(sawtooth_s(x), 0.0)) < 1e-6);
  }
}

TEST_CASE("modified sawtooth at an integer telescopes to a cotangent") {
  // sum over r != 0 of 1/(r + eps) = pi cot(pi eps) - 1/eps
  const cplx expect = -(kPi / std::tan(kPi * 0.25) - 4.0) / cplx(0.0, kTwoPi);
  CHECK(close(modified_sawtooth(3.0, 0.25, 1e-8), expect) < 1e-8);
  const cplx p1 = modified_sawtooth_partial(3.0, 0.25, 200000);
  const cplx p2 = modified_sawtooth_partial(3.0, 0.25, 400000);
  CHECK(close(p1, expect) < 1e-4);
  CHECK(close(p2, expect) < close(p1, expect) + 1e-12);
}

TEST_CASE("modified sawtooth against a long brute-force partial sum") {
  const cplx brute = modified_sawtooth_partial(0.3, 0.5, 10'000'000);
  CHECK(close(modified_sawtooth(0.3, 0.5, 1e-6), brute) < 1e-5);
  CHECK(close(modified_sawtooth(0.3, 0.5, 1e-10), modified_sawtooth_direct(0.3, 0.5, 1e-6)) <
        1e-5);
}

TEST_CASE("direct sawtooth route reports unreachable accuracy") {
  CHECK_THROWS_AS(modified_sawtooth_direct(0.3, 0.1, 1e-9, 1000), AccuracyError);
}

TEST_CASE("starred sum weights") {
  const std::vector<cplx> w3{1.0, 1.0, 1.0};
  CHECK(close(starred_sum(w3, true, true), 2.0) == 0.0);
  CHECK(close(starred_sum(w3, false, false), 3.0) == 0.0);
  const std::vector<cplx> w2{cplx(0, 1), cplx(0, -1)};
  CHECK(close(starred_sum(w2, true, false), cplx(0, -0.5)) == 0.0);
}

TEST_CASE("compensated summation contract") {
  const int n = 1'000'000;
  ComplexAccumulator acc;
  long double re = 0, im = 0;
  for (int k = 0; k < n; ++k) {
    const double t = std::sqrt(static_cast<double>(k)) * 0.7071;
    const cplx z = expi_turns(t);
    acc.add(z);
    re += z.real();
    im += z.imag();
  }
  const double ulp1 = std::nextafter(1.0, 2.0) - 1.0;
  CHECK(std::abs(acc.value() - cplx(static_cast<double>(re), static_cast<double>(im))) <=
        8.0 * n * ulp1);
}

TEST_CASE("e(x) reduction") {
  CHECK(close(expi_turns(0.25), cplx(0, 1)) < 1e-15);
  CHECK(close(expi_turns(1e12 + 0.5), cplx(-1, 0)) < 1e-15);
  CHECK(close(expi_turns(static_cast<long double>(123456789.125L)), std::polar(1.0, kPi / 4)) <
        1e-12);
}
