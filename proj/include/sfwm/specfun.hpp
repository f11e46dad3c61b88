#pragma once
// Complex special functions needed by the analytic limits: modified Bessel
// K_nu of complex argument, Kelvin functions of the second kind, the Faddeeva
// function w(z), and Gaussian quadrature node builders.

#include <complex>
#include <utility>
#include <vector>

#include "sfwm/model.hpp"

namespace sfwm {

// Modified Bessel function of the second kind K_nu(z), nu in {0, 1}, on the
// principal branch.  Ascending series for |z| <= 7, asymptotic expansion
// beyond.  Throws on z = 0 or off-branch argument (Re z < 0 with Im z = 0-).
cplx bessel_k(int order, cplx z);

// Kelvin functions of the second kind of order one:
//   Ker1(x) + i*Kei1(x) = e^{-i pi/2} K_1(e^{i pi/4} x)   for real x,
// extended to complex x by analytic continuation of real and imaginary parts
// separately (Schwarz-symmetric combination), so that Ker1/Kei1 remain the
// analytic continuations of the real-axis Ker/Kei.
std::pair<cplx, cplx> kelvin_pair(cplx x);

// Faddeeva function w(z) = e^{-z^2} erfc(-i z), valid in the whole plane.
// Used for exact Gaussian velocity averages of simple-pole integrands.
cplx faddeeva_w(cplx z);

// Error function (thin wrapper, kept for a uniform special-function surface).
double erf(double x);

struct Quadrature {
  std::vector<double> nodes, weights;
};

// Gauss-Hermite nodes/weights for weight exp(-x^2) on (-inf, inf),
// via Golub-Welsch on the Jacobi matrix.
Quadrature gauss_hermite(int n);

// Gauss-Legendre nodes/weights on [a, b].
Quadrature gauss_legendre(int n, double a, double b);

}  // namespace sfwm
