#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "kernels_internal.hpp"
#include "vdc/kernels.hpp"

namespace vdc::kernels {
namespace {

bool cpu_has_avx2_fma() {
#if defined(VDC_HAVE_AVX2_KERNEL) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa pick_isa() {
  const char* env = std::getenv("VDC_KERNEL");
  if (env != nullptr && std::strcmp(env, "scalar") == 0) return Isa::scalar;
  return cpu_has_avx2_fma() ? Isa::avx2 : Isa::scalar;
}

}  // namespace

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool avx2_available() {
  static const bool ok = cpu_has_avx2_fma();
  return ok;
}

Isa active_isa() {
  static const Isa isa = pick_isa();
  return isa;
}

void cis_accumulate_avx2(std::span<const double> amp, std::span<const double> turns,
                         ComplexAccumulator& acc) {
  if (amp.size() != turns.size()) throw std::invalid_argument("cis_accumulate: size mismatch");
  if (!avx2_available()) throw std::runtime_error("AVX2/FMA kernel not available on this build/CPU");
#if defined(VDC_HAVE_AVX2_KERNEL)
  if (amp.empty()) return;
  double lanes[16];
  detail::cis_avx2_raw(amp.data(), turns.data(), amp.size(), lanes);
  // Fixed lane order keeps the merged result reproducible.
  for (int l = 0; l < 4; ++l) acc.merge({lanes[l], lanes[4 + l]}, {lanes[8 + l], lanes[12 + l]}, 0);
  acc.merge({0.0, 0.0}, {0.0, 0.0}, static_cast<std::int64_t>(amp.size()));
#endif
}

void cis_accumulate(std::span<const double> amp, std::span<const double> turns,
                    ComplexAccumulator& acc) {
  if (active_isa() == Isa::avx2)
    cis_accumulate_avx2(amp, turns, acc);
  else
    cis_accumulate_scalar(amp, turns, acc);
}

void CisBatch::flush() {
  if (n_ == 0) return;
  cis_accumulate(std::span<const double>(amp_, n_), std::span<const double>(turns_, n_), acc_);
  n_ = 0;
}

}  // namespace vdc::kernels
