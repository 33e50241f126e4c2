#include <cmath>

#include "vdc/quad.hpp"

namespace vdc {
namespace {

constexpr double kSeriesLimit = 1.5;
constexpr double kAsymptoticFrom = 40.0;

// sum_k (i pi)^k u^{2k+1} / (k! (2k+1))
cplx fresnel_series(double u) {
  const cplx ipi(0.0, kPi);
  const double u2 = u * u;
  cplx power = u;  // (i pi u^2)^k u / k!
  cplx sum = u;
  for (int k = 1; k < 200; ++k) {
    power *= ipi * u2 / static_cast<double>(k);
    const cplx term = power / static_cast<double>(2 * k + 1);
    sum += term;
    if (std::abs(term) < 1e-19 * std::max(1.0, std::abs(sum))) break;
  }
  return sum;
}

PhaseAmplitudeModel half_square_model(double hi) {
  PhaseAmplitudeModel m;
  m.name = "x^2/2";
  m.f = [](long double x) { return 0.5L * x * x; };
  m.f1 = [](double x) { return x; };
  m.f2 = [](double) { return 1.0; };
  m.f3 = m.f4 = [](double) { return 0.0; };
  m.g = [](double) { return 1.0; };
  m.g1 = m.g2 = m.g3 = [](double) { return 0.0; };
  m.domain = {0.0, hi};
  return m;
}

// int_u^inf e(x^2/2) dx ~ -(e(u^2/2)/(2 pi i u)) sum_k (2k-1)!! / (2 pi i u^2)^k
cplx fresnel_complement(double u) {
  const cplx z = cplx(0.0, kTwoPi) * u * u;
  cplx term = 1.0, sum = 1.0;
  for (int k = 1; k < 30; ++k) {
    const cplx next = term * static_cast<double>(2 * k - 1) / z;
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < 1e-18) break;
  }
  return -expi_turns(0.5L * static_cast<long double>(u) * u) / (cplx(0.0, kTwoPi) * u) * sum;
}

}  // namespace

cplx fresnel_modified(double u) {
  if (!std::isfinite(u)) throw ParameterError("fresnel_modified: non-finite u");
  if (u < 0.0) return -fresnel_modified(-u);
  if (u <= kSeriesLimit) return fresnel_series(u);
  if (u >= kAsymptoticFrom) return 0.5 * expi_turns(0.125) - fresnel_complement(u);
  const PhaseAmplitudeModel m = half_square_model(u);
  const QuadResult q = oscillatory_integral(m, 0.0, kSeriesLimit, u, 1e-14);
  return fresnel_series(kSeriesLimit) + q.value;
}

}  // namespace vdc
