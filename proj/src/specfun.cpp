#include "sfwm/specfun.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace sfwm {

namespace {

// ---- modified Bessel I0/I1 by ascending series (helper for K) -------------

cplx series_i0(cplx q) {  // q = z^2/4
  cplx sum = 1.0, term = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= q / double(k * k);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

cplx series_i1_over_halfz(cplx q) {  // I1(z)/(z/2) = sum q^k/(k!(k+1)!)
  cplx sum = 1.0, term = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= q / double(k * (k + 1));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

constexpr double euler_gamma = 0.57721566490153286061;

// Ascending series for K0, K1 (principal branch of log).
cplx bessel_k_series(int order, cplx z) {
  cplx q = z * z / 4.0;
  cplx lg = std::log(z / 2.0);
  if (order == 0) {
    // K0 = -(ln(z/2)+gamma) I0 + sum_{k>=1} H_k q^k/(k!)^2
    cplx sum = 0.0, term = 1.0;
    double hk = 0.0;
    for (int k = 1; k < 200; ++k) {
      term *= q / double(k * k);
      hk += 1.0 / k;
      cplx add = term * hk;
      sum += add;
      if (std::abs(add) < 1e-18 * (std::abs(sum) + 1.0)) break;
    }
    return -(lg + euler_gamma) * series_i0(q) + sum;
  }
  // K1 = 1/z + ln(z/2) I1 - (z/4) sum [psi(k+1)+psi(k+2)] q^k/(k!(k+1)!)
  cplx i1 = (z / 2.0) * series_i1_over_halfz(q);
  cplx sum = 0.0, term = 1.0;
  double psi1 = -euler_gamma, psi2 = -euler_gamma + 1.0;
  for (int k = 0; k < 200; ++k) {
    if (k > 0) {
      term *= q / double(k * (k + 1));
      psi1 += 1.0 / k;
      psi2 += 1.0 / (k + 1);
    }
    cplx add = term * (psi1 + psi2);
    sum += add;
    if (k > 2 && std::abs(add) < 1e-18 * (std::abs(sum) + 1.0)) break;
  }
  return 1.0 / z + lg * i1 - (z / 4.0) * sum;
}

// Asymptotic expansion K_nu(z) ~ sqrt(pi/2z) e^{-z} sum a_k(nu)/z^k.
cplx bessel_k_asymptotic(int order, cplx z) {
  double mu = 4.0 * order * order;
  cplx sum = 1.0, term = 1.0;
  double prev = 1e300;
  for (int k = 1; k < 40; ++k) {
    double num = mu - double(2 * k - 1) * double(2 * k - 1);
    term *= num / (8.0 * k) / z;
    double mag = std::abs(term);
    if (mag > prev) break;  // asymptotic tail started to diverge
    sum += term;
    prev = mag;
    if (mag < 1e-16 * std::abs(sum)) break;
  }
  return std::sqrt(pi / (2.0 * z)) * std::exp(-z) * sum;
}

}  // namespace

cplx bessel_k(int order, cplx z) {
  if (order != 0 && order != 1)
    throw std::invalid_argument("bessel_k: order must be 0 or 1");
  if (z == cplx(0.0, 0.0))
    throw std::domain_error("bessel_k: z = 0 is a singular point");
  if (z.real() < 0.0 && z.imag() == 0.0)
    throw std::domain_error("bessel_k: argument on the branch cut");
  return (std::abs(z) <= 7.0) ? bessel_k_series(order, z)
                              : bessel_k_asymptotic(order, z);
}

std::pair<cplx, cplx> kelvin_pair(cplx x) {
  if (x == cplx(0.0, 0.0))
    throw std::domain_error("kelvin_pair: x = 0 is a singular point");
  // f(x)   = e^{-i pi/2} K1(e^{+i pi/4} x)
  // fbar(x)= e^{+i pi/2} K1(e^{-i pi/4} x)  (Schwarz partner, = conj(f(conj x)))
  const cplx rot = std::polar(1.0, pi / 4.0);
  cplx f = cplx(0.0, -1.0) * bessel_k(1, rot * x);
  cplx fb = cplx(0.0, +1.0) * bessel_k(1, std::conj(rot) * x);
  cplx ker = (f + fb) / 2.0;
  cplx kei = (f - fb) / cplx(0.0, 2.0);
  return {ker, kei};
}

// ---- Faddeeva function -----------------------------------------------------

namespace {

// Weideman rational expansion coefficients for w(z) in the upper half plane.
// Built once at first use from the discrete Fourier transform of the sampled
// auxiliary function (J.A.C. Weideman, SIAM J. Numer. Anal. 31, 1994).
constexpr int wn = 64;
double weideman_coef[wn];
double weideman_l = 0.0;
std::once_flag weideman_once;

void build_weideman() {
  const int m = 2 * wn, m2 = 4 * wn;
  weideman_l = std::sqrt(wn / std::sqrt(2.0));
  const double L = weideman_l;
  // Sample f(theta) = exp(-t^2)(L^2+t^2), t = L tan(theta/2), with an extra
  // leading zero, then take the shifted DFT (plain O(M^2), done once).
  std::vector<double> f(m2, 0.0);
  for (int j = 1; j < m2; ++j) {
    int k = j - m;  // k = -M+1 .. M-1
    double theta = k * pi / m;
    double t = L * std::tan(theta / 2.0);
    f[j] = std::exp(-t * t) * (L * L + t * t);
  }
  std::vector<double> g(m2);  // fftshift
  for (int j = 0; j < m2; ++j) g[j] = f[(j + m) % m2];
  for (int n = 1; n <= wn; ++n) {
    double re = 0.0;
    for (int j = 0; j < m2; ++j) re += g[j] * std::cos(2.0 * pi * j * n / m2);
    weideman_coef[n - 1] = re / m2;  // ascending-power coefficient a_n
  }
}

cplx faddeeva_upper(cplx z) {
  // Asymptotic continued-fraction-free tail for large |z| (Im z >= 0).
  double az2 = std::norm(z);
  if (az2 > 144.0) {
    cplx iz = 1.0 / z;
    cplx iz2 = iz * iz;
    cplx s = iz * (1.0 + iz2 * (0.5 + iz2 * (0.75 + iz2 * 1.875)));
    return cplx(0.0, 1.0 / std::sqrt(pi)) * s;
  }
  std::call_once(weideman_once, build_weideman);
  const double L = weideman_l;
  cplx iz = cplx(0.0, 1.0) * z;
  cplx den = L - iz;
  cplx zz = (L + iz) / den;
  cplx p = 0.0;
  for (int n = wn - 1; n >= 0; --n) p = p * zz + weideman_coef[n];
  return 2.0 * p / (den * den) + (1.0 / std::sqrt(pi)) / den;
}

}  // namespace

cplx faddeeva_w(cplx z) {
  if (z.imag() >= 0.0) return faddeeva_upper(z);
  // Reflection: w(z) = 2 exp(-z^2) - conj(w(conj(z)))
  return 2.0 * std::exp(-z * z) - std::conj(faddeeva_upper(std::conj(z)));
}

double erf(double x) { return std::erf(x); }

// ---- Gaussian quadrature via Golub-Welsch ----------------------------------

namespace {

void golub_welsch(const std::vector<double>& offdiag, double mu0,
                  std::vector<double>& nodes, std::vector<double>& weights) {
  int n = int(offdiag.size()) + 1;
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k + 1 < n; ++k) {
    j(k, k + 1) = offdiag[k];
    j(k + 1, k) = offdiag[k];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  nodes.resize(n);
  weights.resize(n);
  for (int k = 0; k < n; ++k) {
    nodes[k] = es.eigenvalues()(k);
    double v0 = es.eigenvectors()(0, k);
    weights[k] = mu0 * v0 * v0;
  }
}

}  // namespace

Quadrature gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: n >= 1 required");
  std::vector<double> b(n - 1);
  for (int k = 1; k < n; ++k) b[k - 1] = std::sqrt(k / 2.0);
  Quadrature q;
  golub_welsch(b, std::sqrt(pi), q.nodes, q.weights);
  return q;
}

Quadrature gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1 required");
  std::vector<double> off(n - 1);
  for (int k = 1; k < n; ++k) off[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
  Quadrature q;
  golub_welsch(off, 2.0, q.nodes, q.weights);
  for (int k = 0; k < n; ++k) {
    q.nodes[k] = 0.5 * (b - a) * q.nodes[k] + 0.5 * (a + b);
    q.weights[k] *= 0.5 * (b - a);
  }
  return q;
}

}  // namespace sfwm
