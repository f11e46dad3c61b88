#include <arm_neon.h>

#include "sfwm/kernels.hpp"

namespace sfwm::kernels {

void bilinear_accum_neon(const cplx* const a[3], const cplx* const b[3],
                         const cplx d[9], cplx w, std::size_t n, cplx* out) {
  float64x2_t c_re[9], c_im[9];
  for (int t = 0; t < 9; ++t) {
    const cplx c = w * d[t];
    c_re[t] = vdupq_n_f64(c.real());
    c_im[t] = vdupq_n_f64(c.imag());
  }
  for (std::size_t k = 0; k < n; ++k) {
    float64x2_t acc = vdupq_n_f64(0.0);
    for (int i = 0; i < 3; ++i) {
      const float64x2_t va =
          vld1q_f64(reinterpret_cast<const double*>(a[i] + k));
      const float64x2_t a_re = vdupq_laneq_f64(va, 0);
      const float64x2_t a_im = vdupq_laneq_f64(va, 1);
      for (int j = 0; j < 3; ++j) {
        const float64x2_t vb =
            vld1q_f64(reinterpret_cast<const double*>(b[j] + k));
        const float64x2_t b_sw = vextq_f64(vb, vb, 1);
        // conj(a)*b: [ar*br + ai*bi, ar*bi - ai*br]
        float64x2_t p = vmulq_f64(a_re, vb);
        const float64x2_t q = vmulq_f64(a_im, b_sw);
        p = vsetq_lane_f64(vgetq_lane_f64(p, 0) + vgetq_lane_f64(q, 0), p, 0);
        p = vsetq_lane_f64(vgetq_lane_f64(p, 1) - vgetq_lane_f64(q, 1), p, 1);
        // c*p: [cr*pr - ci*pi, cr*pi + ci*pr]
        const float64x2_t p_sw = vextq_f64(p, p, 1);
        float64x2_t r = vmulq_f64(c_re[3 * i + j], p);
        const float64x2_t s = vmulq_f64(c_im[3 * i + j], p_sw);
        r = vsetq_lane_f64(vgetq_lane_f64(r, 0) - vgetq_lane_f64(s, 0), r, 0);
        r = vsetq_lane_f64(vgetq_lane_f64(r, 1) + vgetq_lane_f64(s, 1), r, 1);
        acc = vaddq_f64(acc, r);
      }
    }
    double* o = reinterpret_cast<double*>(out + k);
    vst1q_f64(o, vaddq_f64(vld1q_f64(o), acc));
  }
}

}  // namespace sfwm::kernels
