#include <immintrin.h>

#include <cstddef>

#include "kernels_internal.hpp"

namespace vdc::kernels::detail {
namespace {

constexpr double kTwoPiD = 6.28318530717958647692528676655900577;

// Taylor polynomials on |y| <= pi/4; truncation error below 5e-17.
inline __m256d sin_poly(__m256d y) {
  const __m256d y2 = _mm256_mul_pd(y, y);
  __m256d p = _mm256_set1_pd(1.0 / 355687428096000.0);
  p = _mm256_fmadd_pd(p, y2, _mm256_set1_pd(-1.0 / 1307674368000.0));
  p = _mm256_fmadd_pd(p, y2, _mm256_set1_pd(1.0 / 6227020800.0));
  p = _mm256_fmadd_pd(p, y2, _mm256_set1_pd(-1.0 / 39916800.0));
  p = _mm256_fmadd_pd(p, y2, _mm256_set1_pd(1.0 / 362880.0));
  p = _mm256_fmadd_pd(p, y2, _mm256_set1_pd(-1.0 / 5040.0));
  p = _mm256_fmadd_pd(p, y2, _mm256_set1_pd(1.0 / 120.0));
  p = _mm256_fmadd_pd(p, y2, _mm256_set1_pd(-1.0 / 6.0));
  return _mm256_fmadd_pd(_mm256_mul_pd(p, y2), y, y);
}

inline __m256d cos_poly(__m256d y) {
  const __m256d y2 = _mm256_mul_pd(y, y);
  __m256d p = _mm256_set1_pd(-1.0 / 6402373705728000.0);
  p = _mm256_fmadd_pd(p, y2, _mm256_set1_pd(1.0 / 20922789888000.0));
  p = _mm256_fmadd_pd(p, y2, _mm256_set1_pd(-1.0 / 87178291200.0));
  p = _mm256_fmadd_pd(p, y2, _mm256_set1_pd(1.0 / 479001600.0));
  p = _mm256_fmadd_pd(p, y2, _mm256_set1_pd(-1.0 / 3628800.0));
  p = _mm256_fmadd_pd(p, y2, _mm256_set1_pd(1.0 / 40320.0));
  p = _mm256_fmadd_pd(p, y2, _mm256_set1_pd(-1.0 / 720.0));
  p = _mm256_fmadd_pd(p, y2, _mm256_set1_pd(1.0 / 24.0));
  p = _mm256_fmadd_pd(p, y2, _mm256_set1_pd(-0.5));
  return _mm256_fmadd_pd(p, y2, _mm256_set1_pd(1.0));
}

inline void neumaier(__m256d& s, __m256d& c, __m256d v, __m256d absmask) {
  const __m256d t = _mm256_add_pd(s, v);
  const __m256d big_s =
      _mm256_cmp_pd(_mm256_and_pd(s, absmask), _mm256_and_pd(v, absmask), _CMP_GE_OQ);
  const __m256d if_s = _mm256_add_pd(_mm256_sub_pd(s, t), v);
  const __m256d if_v = _mm256_add_pd(_mm256_sub_pd(v, t), s);
  c = _mm256_add_pd(c, _mm256_blendv_pd(if_v, if_s, big_s));
  s = t;
}

struct Lanes {
  __m256d sre = _mm256_setzero_pd();
  __m256d sim = _mm256_setzero_pd();
  __m256d cre = _mm256_setzero_pd();
  __m256d cim = _mm256_setzero_pd();
};

inline void step(Lanes& L, __m256d a, __m256d t) {
  const __m256d signmask = _mm256_set1_pd(-0.0);
  const __m256d absmask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  const int kNearest = _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC;

  t = _mm256_sub_pd(t, _mm256_round_pd(t, kNearest));  // |t| <= 1/2
  const __m256d q = _mm256_round_pd(_mm256_mul_pd(t, _mm256_set1_pd(4.0)), kNearest);
  const __m256d y =
      _mm256_mul_pd(_mm256_fnmadd_pd(q, _mm256_set1_pd(0.25), t), _mm256_set1_pd(kTwoPiD));
  const __m256d s = sin_poly(y);
  const __m256d c = cos_poly(y);

  // quadrant k = q mod 4 in {0,1,2,3}
  const __m256d zero = _mm256_setzero_pd();
  const __m256d k = _mm256_add_pd(
      q, _mm256_and_pd(_mm256_cmp_pd(q, zero, _CMP_LT_OQ), _mm256_set1_pd(4.0)));
  const __m256d k1 = _mm256_cmp_pd(k, _mm256_set1_pd(1.0), _CMP_EQ_OQ);
  const __m256d k2 = _mm256_cmp_pd(k, _mm256_set1_pd(2.0), _CMP_EQ_OQ);
  const __m256d k3 = _mm256_cmp_pd(k, _mm256_set1_pd(3.0), _CMP_EQ_OQ);
  const __m256d swap = _mm256_or_pd(k1, k3);
  const __m256d neg_c = _mm256_or_pd(k1, k2);
  const __m256d neg_s = _mm256_or_pd(k2, k3);

  __m256d cr = _mm256_blendv_pd(c, s, swap);
  __m256d sr = _mm256_blendv_pd(s, c, swap);
  cr = _mm256_xor_pd(cr, _mm256_and_pd(neg_c, signmask));
  sr = _mm256_xor_pd(sr, _mm256_and_pd(neg_s, signmask));

  neumaier(L.sre, L.cre, _mm256_mul_pd(a, cr), absmask);
  neumaier(L.sim, L.cim, _mm256_mul_pd(a, sr), absmask);
}

}  // namespace

void cis_avx2_raw(const double* amp, const double* turns, std::size_t n, double* out) {
  Lanes L;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) step(L, _mm256_loadu_pd(amp + i), _mm256_loadu_pd(turns + i));
  if (i < n) {
    alignas(32) double a[4] = {0.0, 0.0, 0.0, 0.0};
    alignas(32) double t[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t j = 0; i + j < n; ++j) {
      a[j] = amp[i + j];
      t[j] = turns[i + j];
    }
    step(L, _mm256_load_pd(a), _mm256_load_pd(t));
  }
  _mm256_storeu_pd(out + 0, L.sre);
  _mm256_storeu_pd(out + 4, L.sim);
  _mm256_storeu_pd(out + 8, L.cre);
  _mm256_storeu_pd(out + 12, L.cim);
}

}  // namespace vdc::kernels::detail
