#include <immintrin.h>

#include "sfwm/kernels.hpp"

namespace sfwm::kernels {

namespace {

// conj(a) * b for two packed complex doubles per vector.
inline __m256d conj_mul(__m256d va, __m256d vb) {
  const __m256d a_re = _mm256_movedup_pd(va);        // [ar ar ...]
  const __m256d a_im = _mm256_permute_pd(va, 0xF);   // [ai ai ...]
  const __m256d b_sw = _mm256_permute_pd(vb, 0x5);   // [bi br ...]
  // even lanes: ar*br + ai*bi ; odd lanes: ar*bi - ai*br
  return _mm256_fmsubadd_pd(a_re, vb, _mm256_mul_pd(a_im, b_sw));
}

// c * p with c broadcast as (c_re, c_im) vectors.
inline __m256d scale_mul(__m256d c_re, __m256d c_im, __m256d p) {
  const __m256d p_sw = _mm256_permute_pd(p, 0x5);
  // even lanes: cr*pr - ci*pi ; odd lanes: cr*pi + ci*pr
  return _mm256_fmaddsub_pd(c_re, p, _mm256_mul_pd(c_im, p_sw));
}

}  // namespace

void bilinear_accum_avx2(const cplx* const a[3], const cplx* const b[3],
                         const cplx d[9], cplx w, std::size_t n, cplx* out) {
  __m256d c_re[9], c_im[9];
  for (int t = 0; t < 9; ++t) {
    const cplx c = w * d[t];
    c_re[t] = _mm256_set1_pd(c.real());
    c_im[t] = _mm256_set1_pd(c.imag());
  }
  const std::size_t n2 = n & ~std::size_t(1);
  for (std::size_t k = 0; k < n2; k += 2) {
    __m256d acc = _mm256_setzero_pd();
    for (int i = 0; i < 3; ++i) {
      const __m256d va =
          _mm256_loadu_pd(reinterpret_cast<const double*>(a[i] + k));
      for (int j = 0; j < 3; ++j) {
        const __m256d vb =
            _mm256_loadu_pd(reinterpret_cast<const double*>(b[j] + k));
        const __m256d p = conj_mul(va, vb);
        acc = _mm256_add_pd(acc, scale_mul(c_re[3 * i + j], c_im[3 * i + j], p));
      }
    }
    double* o = reinterpret_cast<double*>(out + k);
    _mm256_storeu_pd(o, _mm256_add_pd(_mm256_loadu_pd(o), acc));
  }
  if (n2 < n) {
    const cplx* ta[3] = {a[0] + n2, a[1] + n2, a[2] + n2};
    const cplx* tb[3] = {b[0] + n2, b[1] + n2, b[2] + n2};
    bilinear_accum_scalar(ta, tb, d, w, n - n2, out + n2);
  }
}

}  // namespace sfwm::kernels
