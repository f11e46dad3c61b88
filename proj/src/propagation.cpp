#include "sfwm/propagation.hpp"

#include <cmath>
#include <stdexcept>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_odeiv2.h>

namespace sfwm {

cplx expm1_over(cplx x) {
  if (std::abs(x) < 1e-4) {
    // (e^x - 1)/x = 1 + x/2 + x^2/6 + x^3/24, error ~ |x|^4/120
    return 1.0 + x * (0.5 + x * (1.0 / 6.0 + x / 24.0));
  }
  return (std::exp(x) - 1.0) / x;
}

namespace {

// (cosh x - 1)/x^2, removable at x = 0.
cplx coshm1_over_sq(cplx x) {
  if (std::abs(x) < 1e-3) {
    cplx x2 = x * x;
    return 0.5 + x2 * (1.0 / 24.0 + x2 / 720.0);
  }
  return (std::cosh(x) - 1.0) / (x * x);
}

// sinh(x)/x, removable at x = 0.
cplx sinhc(cplx x) {
  if (std::abs(x) < 1e-4) {
    cplx x2 = x * x;
    return 1.0 + x2 * (1.0 / 6.0 + x2 / 120.0);
  }
  return std::sinh(x) / x;
}

}  // namespace

TransferMatrix transfer_gsa(const ParametricCoefficients& c) {
  TransferMatrix t;
  const cplx em = expm1_over(-c.gamma_i);  // (e^{-Gi} - 1)/(-Gi)
  t.a1 = 1.0;
  t.b1 = -c.kappa_s * em;
  t.c1 = -c.kappa_i * em;
  t.d1 = std::exp(-c.gamma_i);
  return t;
}

TransferMatrix transfer_exact(const ParametricCoefficients& c) {
  const cplx g = c.g_s, gi = c.gamma_i;
  const cplx phi = 0.5 * std::sqrt((g - gi) * (g - gi) +
                                   4.0 * c.kappa_s * c.kappa_i);
  // cosh and sinh(x)/x are even in x, so the branch of the root is moot.
  const cplx pre = std::exp(-0.5 * (g + gi));
  const cplx ch = std::cosh(phi);
  const cplx shc = sinhc(phi);  // sinh(phi)/phi
  TransferMatrix t;
  t.a1 = pre * (ch - 0.5 * (g - gi) * shc);
  t.b1 = -pre * c.kappa_s * shc;
  t.c1 = -pre * c.kappa_i * shc;
  t.d1 = pre * (ch + 0.5 * (g - gi) * shc);
  return t;
}

TransferMatrix transfer_backward(const ParametricCoefficients& c) {
  TransferMatrix t;
  const cplx gb = c.gamma_i;
  t.a1 = 1.0 + 2.0 * c.kappa_s * c.kappa_i * (-coshm1_over_sq(gb));
  t.b1 = -c.kappa_s * expm1_over(gb);
  t.c1 = c.kappa_i * expm1_over(gb);
  t.d1 = std::exp(gb);
  return t;
}

NoisePropagators noise_propagators(const ParametricCoefficients& c, double z,
                                   Geometry geometry) {
  if (z < 0.0 || z > 1.0)
    throw std::domain_error("noise_propagators: z must lie in [0,1]");
  NoisePropagators n;
  if (geometry == Geometry::forward) {
    const double rem = 1.0 - z;
    const cplx x = -c.gamma_i * rem;
    n.a2 = 1.0;
    n.b2 = -c.kappa_s * rem * expm1_over(x);
    n.c2 = -c.kappa_i * rem * expm1_over(x);
    n.d2 = std::exp(x);
  } else {
    const cplx gb = c.gamma_i;
    const cplx ez = std::exp(gb * z);
    n.a2 = 1.0 + c.kappa_s * c.kappa_i * expm1_over(gb) * (z - 1.0) *
                     expm1_over(gb * (z - 1.0));
    n.b2 = c.kappa_s * z * expm1_over(gb * z);
    n.c2 = c.kappa_i * ez * (1.0 - z) * expm1_over(gb * (1.0 - z));
    n.d2 = -ez;
  }
  return n;
}

namespace {

struct OdeParams {
  const ParametricCoefficients* c;
};

int ode_rhs(double /*z*/, const double y[], double dydz[], void* params) {
  const auto* c = static_cast<const OdeParams*>(params)->c;
  // y packs [a1 b1 c1 d1] as interleaved re/im; V' = -M V with
  // M = [[G_s, kappa_s],[kappa_i, Gamma_i]].
  const cplx a1(y[0], y[1]), b1(y[2], y[3]), c1(y[4], y[5]), d1(y[6], y[7]);
  const cplx da = -(c->g_s * a1 + c->kappa_s * c1);
  const cplx db = -(c->g_s * b1 + c->kappa_s * d1);
  const cplx dc = -(c->kappa_i * a1 + c->gamma_i * c1);
  const cplx dd = -(c->kappa_i * b1 + c->gamma_i * d1);
  dydz[0] = da.real();
  dydz[1] = da.imag();
  dydz[2] = db.real();
  dydz[3] = db.imag();
  dydz[4] = dc.real();
  dydz[5] = dc.imag();
  dydz[6] = dd.real();
  dydz[7] = dd.imag();
  return GSL_SUCCESS;
}

}  // namespace

TransferMatrix ode_reference(const ParametricCoefficients& c, double tol) {
  OdeParams p{&c};
  gsl_odeiv2_system sys{ode_rhs, nullptr, 8, &p};
  gsl_odeiv2_driver* drv = gsl_odeiv2_driver_alloc_y_new(
      &sys, gsl_odeiv2_step_rk8pd, 1e-4, tol, tol);
  double y[8] = {1, 0, 0, 0, 0, 0, 1, 0};
  double z = 0.0;
  int status = gsl_odeiv2_driver_apply(drv, &z, 1.0, y);
  gsl_odeiv2_driver_free(drv);
  if (status != GSL_SUCCESS)
    throw std::runtime_error("ode_reference: integration failed");
  TransferMatrix t;
  t.a1 = cplx(y[0], y[1]);
  t.b1 = cplx(y[2], y[3]);
  t.c1 = cplx(y[4], y[5]);
  t.d1 = cplx(y[6], y[7]);
  return t;
}

}  // namespace sfwm
