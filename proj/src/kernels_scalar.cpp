#include <cmath>
#include <stdexcept>

#include "vdc/kernels.hpp"

namespace vdc::kernels {

void cis_accumulate_scalar(std::span<const double> amp, std::span<const double> turns,
                           ComplexAccumulator& acc) {
  if (amp.size() != turns.size()) throw std::invalid_argument("cis_accumulate: size mismatch");
  for (std::size_t i = 0; i < amp.size(); ++i) {
    const double t = turns[i] - std::nearbyint(turns[i]);
    const double y = kTwoPi * t;
    acc.add({amp[i] * std::cos(y), amp[i] * std::sin(y)});
  }
}

}  // namespace vdc::kernels
