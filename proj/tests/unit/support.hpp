#pragma once

#include <cmath>
#include <random>

#include "vdc/numutil.hpp"
#include "vdc/phase.hpp"

namespace testsupport {

using vdc::cplx;

// f = c1 x + c2 x^2/2 + c3 x^3/6, g = g0 + g1 x
inline vdc::PhaseAmplitudeModel poly_model(double c1, double c2, double c3, vdc::Interval dom,
                                           double g0 = 1.0, double g1 = 0.0) {
  vdc::PhaseAmplitudeModel m;
  m.name = "poly";
  m.f = [=](long double x) { return c1 * x + c2 * x * x / 2.0L + c3 * x * x * x / 6.0L; };
  m.f1 = [=](double x) { return c1 + c2 * x + c3 * x * x / 2.0; };
  m.f2 = [=](double x) { return c2 + c3 * x; };
  m.f3 = [=](double) { return c3; };
  m.f4 = [](double) { return 0.0; };
  m.g = [=](double x) { return g0 + g1 * x; };
  m.g1 = [=](double) { return g1; };
  m.g2 = [](double) { return 0.0; };
  m.g3 = [](double) { return 0.0; };
  m.domain = dom;
  return m;
}

inline vdc::RealFn one() {
  return [](double) { return 1.0; };
}

inline double close(cplx a, cplx b) { return std::abs(a - b); }

// e(x) in long double, independent of the library reduction
inline cplx e_ref(long double x) {
  const long double t = x - std::floor(x);
  const long double ang = 2.0L * 3.141592653589793238462643383279502884L * t;
  return {static_cast<double>(std::cos(ang)), static_cast<double>(std::sin(ang))};
}

}  // namespace testsupport
