#pragma once

#include <span>

#include "vdc/numutil.hpp"

// Hot loop of the library: acc += sum_i amp[i] * e(turns[i]).
// A scalar reference and an AVX2/FMA variant exist; the variant is picked
// once at startup from CPUID (override with VDC_KERNEL=scalar).
namespace vdc::kernels {

enum class Isa { scalar, avx2 };

const char* isa_name(Isa isa);
bool avx2_available();
Isa active_isa();

void cis_accumulate(std::span<const double> amp, std::span<const double> turns,
                    ComplexAccumulator& acc);

void cis_accumulate_scalar(std::span<const double> amp, std::span<const double> turns,
                           ComplexAccumulator& acc);

// Throws std::runtime_error when the AVX2 variant is not compiled in or the
// CPU lacks AVX2/FMA.
void cis_accumulate_avx2(std::span<const double> amp, std::span<const double> turns,
                         ComplexAccumulator& acc);

// Fixed-capacity staging buffer that flushes through cis_accumulate.
class CisBatch {
 public:
  explicit CisBatch(ComplexAccumulator& acc) : acc_(acc) {}
  ~CisBatch() { flush(); }
  CisBatch(const CisBatch&) = delete;
  CisBatch& operator=(const CisBatch&) = delete;

  void push(double amp, double turns) {
    amp_[n_] = amp;
    turns_[n_] = turns;
    if (++n_ == kCapacity) flush();
  }
  void flush();

 private:
  static constexpr std::size_t kCapacity = 1024;
  ComplexAccumulator& acc_;
  double amp_[kCapacity];
  double turns_[kCapacity];
  std::size_t n_ = 0;
};

}  // namespace vdc::kernels
