#pragma once

#include <cstddef>

namespace vdc::kernels::detail {

// Lane-wise Neumaier partials for sum amp[i]*e(turns[i]).
// out layout: re[4], im[4], comp_re[4], comp_im[4].
// Compiled with -mavx2 -mfma; only ever called after a CPUID check. Keep this
// interface free of inline library types so nothing AVX2-encoded leaks into
// shared inline code.
void cis_avx2_raw(const double* amp, const double* turns, std::size_t n, double* out);

}  // namespace vdc::kernels::detail
