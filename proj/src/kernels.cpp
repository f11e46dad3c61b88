#include "sfwm/kernels.hpp"

namespace sfwm::kernels {

void bilinear_accum_scalar(const cplx* const a[3], const cplx* const b[3],
                           const cplx d[9], cplx w, std::size_t n, cplx* out) {
  for (std::size_t k = 0; k < n; ++k) {
    cplx acc(0.0, 0.0);
    for (int i = 0; i < 3; ++i) {
      const cplx ai = std::conj(a[i][k]);
      acc += ai * (d[3 * i + 0] * b[0][k] + d[3 * i + 1] * b[1][k] +
                   d[3 * i + 2] * b[2][k]);
    }
    out[k] += w * acc;
  }
}

namespace {

using BilinearFn = void (*)(const cplx* const[3], const cplx* const[3],
                            const cplx[9], cplx, std::size_t, cplx*);

struct Dispatcher {
  BilinearFn fn = bilinear_accum_scalar;
  const char* name = "scalar";
  Dispatcher() {
#if defined(SFWM_HAVE_AVX2_TU)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
      fn = bilinear_accum_avx2;
      name = "avx2";
    }
#elif defined(SFWM_HAVE_NEON_TU)
    fn = bilinear_accum_neon;
    name = "neon";
#endif
  }
};

const Dispatcher& dispatcher() {
  static const Dispatcher d;
  return d;
}

}  // namespace

void bilinear_accum(const cplx* const a[3], const cplx* const b[3],
                    const cplx d[9], cplx w, std::size_t n, cplx* out) {
  dispatcher().fn(a, b, d, w, n, out);
}

const char* active_backend() { return dispatcher().name; }

}  // namespace sfwm::kernels
