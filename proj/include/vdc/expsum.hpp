#pragma once

#include <ostream>
#include <span>
#include <vector>

#include "vdc/phase.hpp"

namespace vdc {

struct CurveSample {
  double t = 0.0;
  cplx value{0.0, 0.0};
};

// Integer-limit test used for starred halving: exact when x is integral,
// otherwise |x - round(x)| <= 1e-9 max(1,|x|).
bool is_integer_limit(double x);

// sum*_{a<=n<=b} g(n) e(f(n)); f(n) reduced modulo 1 in long double.
cplx direct_starred_sum(const PhaseAmplitudeModel& m, double a, double b);

// Same sum with e(f(n)) evaluated by long-double cos/sin of 2 pi f(n) with no
// modular reduction; kept as a cross-check of the reduction path.
cplx direct_starred_sum_unreduced(const PhaseAmplitudeModel& m, double a, double b);

// sum*_{a<=n<=e} for every e in `ends` (ascending) in a single pass.
std::vector<cplx> direct_starred_sums(const PhaseAmplitudeModel& m, double a,
                                      std::span<const double> ends);

// S(t) = sum_{1<=n<=t} g(n)e(f(n)) + {t} g(floor t + 1) e(f(floor t + 1)) on
// t = j/samples_per_unit, j = 0..t_max*samples_per_unit.
std::vector<CurveSample> curve_samples(const PhaseAmplitudeModel& m, double t_max,
                                       int samples_per_unit);

void write_curve_csv(std::ostream& os, std::span<const CurveSample> samples);

}  // namespace vdc
