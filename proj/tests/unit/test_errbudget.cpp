#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "support.hpp"
#include "vdc/errbudget.hpp"

using namespace vdc;

TEST_CASE("H and G identities") {
  const double p[] = {2.0, 100.0, 1e4};
  const auto I = builtin_family(Family::ik_monomial, p);
  const auto& m = I.model;
  const auto wr = make_wr_functions(m);
  for (double x = 60.0; x < 6000.0; x *= 1.7) {
    const double H = m.g(x) * m.f3(x) + 3.0 * m.g1(x) * m.f2(x);
    const double G = 12.0 * m.g(x) * m.g2(x) * m.f2(x) * m.f2(x);
    CHECK(wr.H(x) == doctest::Approx(H).epsilon(1e-10));
    CHECK(wr.G(x) == doctest::Approx(G).epsilon(1e-10));
  }
}

TEST_CASE("r+- are roots of the defining quadratic where H^2 - G > 0") {
  const auto C = builtin_family(Family::cubic_dual, {});
  const auto& m = C.model;
  const auto wr = make_wr_functions(m);
  for (double x = 1.0; x < 10.0; x *= 1.3) {
    REQUIRE(wr.disc(x) > 0.0);
    for (const auto* r : {&wr.rplus, &wr.rminus}) {
      const double t = m.f1(x) - (*r)(x);
      const double res = m.g2(x) * t * t - wr.H(x) * t + 3.0 * m.g(x) * m.f2(x) * m.f2(x);
      const double scale = std::abs(m.g2(x) * t * t) + std::abs(wr.H(x) * t);
      CHECK(std::abs(res) <= 1e-8 * scale);
    }
  }
}

TEST_CASE("condition (M) for the power family") {
  const auto P = builtin_family(Family::power, {}, Interval{1.0, 2000.0});
  const auto p = make_profile(MForm::linear, 0.5, testsupport::one());
  const auto R = check_condition_M(P.model, p, 100.0, 1200.0);
  CHECK(R.pass);
  CHECK(R.worst.size() == 7);
}

TEST_CASE("condition (M) for a quadratic phase") {
  const double q[] = {0.3};
  const auto Q = builtin_family(Family::quadratic, q, Interval{0.0, 50.0});
  const auto R = check_condition_M(Q.model, Q.profile, 0.0, 50.0);
  CHECK(R.pass);
  for (const auto& w : R.worst)
    if (w.inequality == "f3" || w.inequality == "f4") CHECK(w.ratio == 0.0);
}

TEST_CASE("condition (M) fails for a fast exponential with wide M") {
  const double e[] = {1.0, 2.0};
  const auto E = builtin_family(Family::exponential, e);
  const auto p = make_profile(MForm::constant, 10.0, testsupport::one());
  const auto R = check_condition_M(E.model, p, 0.0, 20.0);
  CHECK_FALSE(R.pass);
  REQUIRE_FALSE(R.violations.empty());
  const bool f3 = std::any_of(R.violations.begin(), R.violations.end(),
                              [](const auto& v) { return v.inequality == "f3"; });
  CHECK(f3);
  CHECK(R.violations[0].x >= R.J.lo);
  CHECK(R.violations[0].x <= R.J.hi);
}

TEST_CASE("m counts") {
  CHECK(m_count_values(5.0, 0.3, true) == 0);
  CHECK(m_count_values(5.0, 2.5, true) == 4);
  CHECK(m_count_values(5.25, 0.5, false) == 1);
}

TEST_CASE("bar points") {
  const auto P = builtin_family(Family::power, {}, Interval{1.0, 1200.0});
  const auto bp = abar_bbar(P.model, 1.0, 1200.0, P.profile);
  REQUIRE(bp.abar);
  CHECK(*bp.abar == doctest::Approx(12.0));

  const double q[] = {10.0};
  const auto Q = builtin_family(Family::quadratic, q, Interval{0.0, 1.0});
  const auto bq = abar_bbar(Q.model, 0.0, 1.0, Q.profile);
  REQUIRE(bq.abar);
  CHECK(*bq.abar == doctest::Approx(0.5));  // a + min(M, 1/2) lies past x_1 = 0.1

  const double r[] = {0.8, 0.1};
  const auto S = builtin_family(Family::quadratic, r, Interval{0.0, 1.0});
  const auto bs = abar_bbar(S.model, 0.0, 1.0, S.profile);
  CHECK_FALSE(bs.abar);
  CHECK_FALSE(bs.bbar);
  const auto td = tail_deltas(S.model, S.profile, 0.0, 1.0, bs);
  CHECK(td.delta3_a == 0.0);
  CHECK(td.delta3_b == 0.0);
}

TEST_CASE("endpoint deltas") {
  const auto P = builtin_family(Family::power, {}, Interval{1.0, 1200.0});
  const auto d = endpoint_deltas(P.model, P.profile, 1200.0, Endpoint::b, 1.0, 1200.0);
  const double f2 = P.model.f2(1200.0);
  CHECK(d.delta1_case == "integer");
  CHECK(d.delta1 == doctest::Approx(1.0 / (f2 * f2 * std::pow(1199.0, 3))));

  const double q[] = {0.01, 0.2};
  const auto Q = builtin_family(Family::quadratic, q, Interval{0.0, 100.0});
  const auto e = endpoint_deltas(Q.model, Q.profile, 0.0, Endpoint::a, 0.0, 100.0);
  CHECK(e.m == 0);
  CHECK(e.delta1 == 0.0);
  CHECK(e.delta2_case == "otherwise");
  const double common = 1.0 / (1e-4 * 1e6) * (1.0 + 0.1 * 100.0) * 1.01;
  CHECK(e.delta2 == doctest::Approx(common + 1.0 / (100.0 * 0.04) + 0.01 / 0.008));
}

TEST_CASE("tail deltas are finite") {
  const auto P = builtin_family(Family::power, {}, Interval{1.0, 1200.0});
  const auto bars = abar_bbar(P.model, 1.0, 1200.0, P.profile);
  const auto t = tail_deltas(P.model, P.profile, 1.0, 1200.0, bars);
  CHECK(std::isfinite(t.delta3_a));
  CHECK(t.delta3_a > 0.0);
  CHECK(t.converged);

  // monomial pair: delta3(a) / U(a) stays bounded as N grows
  std::vector<double> ratio;
  for (double N : {100.0, 400.0, 1600.0}) {
    const double p[] = {2.0, N, N * N};
    const auto I = builtin_family(Family::ik_monomial, p, Interval{N, 4.0 * N});
    const auto bi = abar_bbar(I.model, N, 4.0 * N, I.profile);
    ratio.push_back(tail_deltas(I.model, I.profile, N, 4.0 * N, bi).delta3_a / I.profile.U(N));
  }
  CHECK(ratio[2] == doctest::Approx(ratio[0]).epsilon(0.1));
  CHECK(ratio[2] < 4.0);
}

TEST_CASE("constant amplitude: G vanishes and J0 is everything") {
  const auto P = builtin_family(Family::power, {}, Interval{1.0, 1200.0});
  const auto part = partition_assumptions(P.model, 10.0, 1200.0, 512);
  CHECK(part.Jpm.empty());
  REQUIRE(part.J0.size() == 1);
  CHECK(part.J0[0].lo == doctest::Approx(10.0));
  CHECK(part.J0[0].hi == doctest::Approx(1200.0));
  CHECK(part.Jnull.empty());
  const auto wr = make_wr_functions(P.model);
  for (double x : {20.0, 300.0, 1100.0}) {
    CHECK(wr.W0(x) == doctest::Approx(2.0 / (9.0 * x * x)));
    CHECK(wr.r0(x) == doctest::Approx(2.0 * std::sqrt(x / 3.0)));
    CHECK(wr.r0_prime(x) > 0.0);
  }
  const auto d4 = global_delta4(P.model, P.profile, part, 10.0, 1200.0, false);
  CHECK(d4.K0.sign_changes == 0);
  CHECK(d4.Kplus.total() == 0.0);
  CHECK(d4.Kminus.total() == 0.0);
}

TEST_CASE("dual cubic phase: both roots everywhere") {
  const auto C = builtin_family(Family::cubic_dual, {});
  const auto wr = make_wr_functions(C.model);
  const double s37 = std::sqrt(37.0);
  for (double x : {1.5, 3.0, 8.0}) {
    CHECK(wr.disc(x) == doctest::Approx(127872.0 * x));
    CHECK(wr.G(x) == doctest::Approx(-41472.0 * x));
    const double rp = wr.rplus(x), rm = wr.rminus(x);
    const double hi = 12.0 * (11.0 + 2.0 * s37) * x * x, lo = 12.0 * (11.0 - 2.0 * s37) * x * x;
    CHECK(std::max(rp, rm) == doctest::Approx(hi));
    CHECK(std::min(rp, rm) == doctest::Approx(lo));
    const double wp = (s37 + 7.0) / (96.0 * std::sqrt(6.0) * std::pow(s37 + 5.0, 3)) *
                      std::pow(x, -4.5);
    const double wm = (s37 - 7.0) / (96.0 * std::sqrt(6.0) * std::pow(s37 - 5.0, 3)) *
                      std::pow(x, -4.5);
    const double a1 = std::abs(wr.Wplus(x)), a2 = std::abs(wr.Wminus(x));
    CHECK(std::max(a1, a2) == doctest::Approx(std::max(std::abs(wp), std::abs(wm))));
    CHECK(std::min(a1, a2) == doctest::Approx(std::min(std::abs(wp), std::abs(wm))));
  }
  const auto part = partition_assumptions(C.model, 1.0, 10.0, 512);
  REQUIRE(part.Jpm.size() == 1);
  CHECK(part.Jpm[0].lo == doctest::Approx(1.0));
  CHECK(part.Jpm[0].hi == doctest::Approx(10.0));
  CHECK(part.J0.empty());
}

TEST_CASE("linear amplitude lands in J0 only") {
  const auto m = testsupport::poly_model(0.0, 0.0, 0.5, {1.0, 10.0}, 2.0, 0.3);
  const auto part = partition_assumptions(m, 1.0, 10.0, 512);
  CHECK(part.Jpm.empty());
  CHECK_FALSE(part.J0.empty());
}

TEST_CASE("sign changes of g are J_null points") {
  // g = sin(x/2) + 1/2 has g'' = 1/2 - g/4, non-zero at its zeros
  const double k[] = {0.5, 0.5};
  const auto S = builtin_family(Family::power_sine, k, Interval{10.0, 30.0});
  const auto part = partition_assumptions(S.model, 10.0, 30.0, 4096);
  const double zeros[] = {11.0 * kPi / 3.0, 7.0 * kPi / 3.0 + 4.0 * kPi, 11.0 * kPi / 3.0 + 4.0 * kPi};
  REQUIRE(part.Jnull.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(part.Jnull[i] == doctest::Approx(zeros[i]).epsilon(1e-9));

  // sin(x/2) alone has g'' = 0 at every zero, so none of them qualifies
  const double k0[] = {0.5, 0.0};
  const auto S0 = builtin_family(Family::power_sine, k0, Interval{10.0, 30.0});
  CHECK(partition_assumptions(S0.model, 10.0, 30.0, 4096).Jnull.empty());
  for (std::size_t i = 0; i < part.Jpm.size(); ++i)
    for (std::size_t j = i + 1; j < part.Jpm.size(); ++j)
      CHECK((part.Jpm[i].hi <= part.Jpm[j].lo || part.Jpm[j].hi <= part.Jpm[i].lo));
  for (double x : part.Jpm_isolated)
    CHECK(std::find(part.boundary_pm.begin(), part.boundary_pm.end(), x) ==
          part.boundary_pm.end());
}

TEST_CASE("tail sets to infinity") {
  const auto P = builtin_family(Family::power, {}, Interval{1.0, 1e6});
  const double N = 12.0 * 2500.0;
  const auto t = toinfinity_deltas(P.model, P.profile, 100.0, N);
  CHECK(t.Kb.lo == doctest::Approx(N / (1.0 + P.profile.eps)).epsilon(1e-6));
  CHECK(t.Kb.hi == doctest::Approx(N));
  const double f2 = P.model.f2(N), M = P.profile.M(N);
  const double formula = 1.0 / (f2 * f2 * std::pow(N - 100.0, 3)) +
                         (1.0 + std::sqrt(f2) * M) / (f2 * f2 * M * M * M);
  CHECK(t.delta3p_b == doctest::Approx(formula));
  // sqrt(f'') M grows like N^{3/4}, so the displayed formula decays like N^{-5/4}
  const double N2 = 16.0 * N;
  const auto t2 = toinfinity_deltas(P.model, P.profile, 100.0, N2);
  const double slope = std::log(t2.delta3p_b / t.delta3p_b) / std::log(16.0);
  CHECK(slope == doctest::Approx(-1.25).epsilon(0.05));

  const auto E = builtin_family(Family::exponential, {});
  const auto te = toinfinity_deltas(E.model, E.profile, 1.0, 5.0);
  CHECK(te.Kb.lo == doctest::Approx(5.0 - E.profile.M(5.0)).epsilon(1e-6));
}

TEST_CASE("budget is a sum of non-negative parts") {
  const auto P = builtin_family(Family::power, {}, Interval{1.0, 30000.0});
  const auto part = partition_assumptions(P.model, 1000.0, 30000.0);
  const auto B = compute_budget(P.model, P.profile, 1000.0, 30000.0, part);
  for (double v : {B.delta1_a(), B.delta1_b(), B.delta2_a(), B.delta2_b(), B.delta3_a(),
                   B.delta3_b(), B.delta4.total()})
    CHECK(v >= 0.0);
  CHECK(std::isfinite(B.total()));
}
