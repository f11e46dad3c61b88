#pragma once

#include <complex>
#include <cstddef>

namespace sfwm::kernels {

using cplx = std::complex<double>;

// Accumulates the weighted bilinear form of three-component vector fields
// sampled on n points:
//   out[k] += w * sum_{i,j} conj(a[i][k]) * d[3*i + j] * b[j][k]
// d is a row-major 3x3 complex matrix.  This is the hot inner operation of
// the noise spectral densities and the velocity-averaged kernels.
void bilinear_accum_scalar(const cplx* const a[3], const cplx* const b[3],
                           const cplx d[9], cplx w, std::size_t n, cplx* out);

#if defined(SFWM_HAVE_AVX2_TU)
void bilinear_accum_avx2(const cplx* const a[3], const cplx* const b[3],
                         const cplx d[9], cplx w, std::size_t n, cplx* out);
#endif
#if defined(SFWM_HAVE_NEON_TU)
void bilinear_accum_neon(const cplx* const a[3], const cplx* const b[3],
                         const cplx d[9], cplx w, std::size_t n, cplx* out);
#endif

// Runtime-dispatched entry point (CPUID-checked on x86_64).
void bilinear_accum(const cplx* const a[3], const cplx* const b[3],
                    const cplx d[9], cplx w, std::size_t n, cplx* out);

// Name of the backend the dispatcher selected: "scalar", "avx2", or "neon".
const char* active_backend();

}  // namespace sfwm::kernels
