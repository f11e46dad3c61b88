#pragma once

#include <array>

#include "sfwm/coefficients.hpp"
#include "sfwm/model.hpp"

namespace sfwm {

// 2x2 frequency-domain transfer matrix mapping the input field pair
// [a_s; a_i^dag] to the output pair at a single frequency.
struct TransferMatrix {
  cplx a1{1.0, 0.0};
  cplx b1{0.0, 0.0};
  cplx c1{0.0, 0.0};
  cplx d1{1.0, 0.0};
};

// Propagators from a noise source at position z in [0,1] to the output,
// plus the kernels composed with a noise coefficient set.
struct NoisePropagators {
  cplx a2, b2, c2, d2;
  // p_jk = a2 zeta^s_jk + b2 zeta^i_jk; q_jk = c2 zeta^s_jk + d2 zeta^i_jk.
  std::array<cplx, 3> p(const NoiseCoefficientSet& z) const {
    return {a2 * z.zeta_s[0] + b2 * z.zeta_i[0],
            a2 * z.zeta_s[1] + b2 * z.zeta_i[1],
            a2 * z.zeta_s[2] + b2 * z.zeta_i[2]};
  }
  std::array<cplx, 3> q(const NoiseCoefficientSet& z) const {
    return {c2 * z.zeta_s[0] + d2 * z.zeta_i[0],
            c2 * z.zeta_s[1] + d2 * z.zeta_i[1],
            c2 * z.zeta_s[2] + d2 * z.zeta_i[2]};
  }
};

// (e^x - 1)/x with the removable singularity handled by series.
cplx expm1_over(cplx x);

// Forward transfer matrix in the weak-pump regime where the signal gain is
// negligible: A1 = 1, B1 = (kappa_s/Gamma_i)(e^{-Gamma_i} - 1),
// C1 likewise with kappa_i, D1 = e^{-Gamma_i}.  Length normalized to 1.
TransferMatrix transfer_gsa(const ParametricCoefficients& c);

// Full 2x2 matrix exponential exp(-M) with M = [[G_s, kappa_s],
// [kappa_i, Gamma_i]], via the closed form with
// Phi = (1/2) sqrt((G_s - Gamma_i)^2 + 4 kappa_s kappa_i).
TransferMatrix transfer_exact(const ParametricCoefficients& c);

// Backward (counter-propagating idler) transfer matrix; expects coefficients
// already mapped to the backward convention (Gamma_iB, kappa_iB negated).
TransferMatrix transfer_backward(const ParametricCoefficients& c);

// Source-position propagators; forward geometry replaces the length by
// (1 - z), backward geometry uses its own closed forms.
NoisePropagators noise_propagators(const ParametricCoefficients& c, double z,
                                   Geometry geometry = Geometry::forward);

// Adaptive high-order integration of d/dz V = -[[G_s,kappa_s],[kappa_i,
// Gamma_i]] V over z in [0,1], starting from the identity.  Serves as an
// independent oracle for the closed-form transfer matrices.
TransferMatrix ode_reference(const ParametricCoefficients& c,
                             double tol = 1e-10);

}  // namespace sfwm
