#include "sfwm/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fftw3.h>

#include "sfwm/coefficients.hpp"
#include "sfwm/specfun.hpp"

namespace sfwm {

namespace {

const cplx im(0.0, 1.0);

// psi(tau_m) = (d omega/2pi) e^{i omega_0 tau_m} sum_j K_j e^{+2pi i jm/n},
// with tau_m = 2pi m/(n d omega), wrapped to negative delays for m > n/2.
void transform_kernel(const FrequencyGrid& grid, const std::vector<cplx>& k,
                      std::vector<double>& tau, std::vector<cplx>& psi) {
  const int n = grid.n;
  const double dw = grid.spacing();
  std::vector<cplx> buf(k);
  fftw_plan plan = fftw_plan_dft_1d(
      n, reinterpret_cast<fftw_complex*>(buf.data()),
      reinterpret_cast<fftw_complex*>(buf.data()), FFTW_BACKWARD,
      FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);

  const double w0 = grid.omega(0);
  std::vector<std::size_t> order(n);
  std::vector<double> t(n);
  for (int m = 0; m < n; ++m) {
    double tm = 2.0 * pi * m / (n * dw);
    if (m > n / 2) tm -= 2.0 * pi / dw;
    t[m] = tm;
  }
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return t[a] < t[b]; });
  tau.resize(n);
  psi.resize(n);
  const double norm = dw / (2.0 * pi);
  for (int m = 0; m < n; ++m) {
    const std::size_t src = order[m];
    tau[m] = t[src];
    psi[m] = norm * std::exp(im * (w0 * t[src])) * buf[src];
  }
}

double trapezoid_rate(const FrequencyGrid& grid,
                      const std::vector<double>& density) {
  double s = 0.0;
  for (double v : density) s += v;
  return s * grid.spacing();
}

}  // namespace

FrequencyGrid correlation_grid(const LevelScheme& scheme,
                               const DriveConfig& drive, int n) {
  const double w = std::max(400.0, 3.0 * drive.od * scheme.gamma31);
  return FrequencyGrid::make(n, w);
}

CorrelationTrace trace_from_kernel(const KernelTrace& kt) {
  CorrelationTrace tr;
  transform_kernel(kt.grid, kt.pair_kernel, tr.tau, tr.psi);
  tr.r_s = trapezoid_rate(kt.grid, kt.s_total);
  tr.r_i = trapezoid_rate(kt.grid, kt.i_total);
  tr.g2si.resize(tr.psi.size());
  const double bg = tr.r_s * tr.r_i;
  for (std::size_t j = 0; j < tr.psi.size(); ++j)
    tr.g2si[j] = 1.0 + std::norm(tr.psi[j]) / bg;
  return tr;
}

CorrelationTrace wavefunction(const LevelScheme& scheme,
                              const DriveConfig& drive,
                              const FrequencyGrid& grid) {
  return trace_from_kernel(kernel_trace(scheme, drive, grid));
}

std::vector<cplx> analytic_wavefunction(const LevelScheme& scheme,
                                        const DriveConfig& drive,
                                        const std::vector<double>& tau) {
  const double alpha = drive.od;
  const double tc = 4.0 / (alpha * scheme.gamma31);
  ParametricCoefficients c0 = gsa_parametric(scheme, drive, 0.0);
  const cplx ratio = c0.kappa_s / c0.gamma_i;
  std::vector<cplx> psi(tau.size());
  for (std::size_t j = 0; j < tau.size(); ++j) {
    const double t = tau[j];
    const double at = std::abs(t);
    if (at == 0.0) {
      psi[j] = cplx(0.0, 0.0);  // reported from the neighboring samples
      continue;
    }
    const cplx theta = 4.0 * im * at / tc;
    auto [ker_p, kei_p] = kelvin_pair(std::sqrt(theta));
    auto [ker_m, kei_m] = kelvin_pair(std::sqrt(-theta));
    const cplx pref =
        std::sqrt(im / (2.0 * pi * pi * at * at * at * tc)) * ratio;
    psi[j] = pref * ((-im * t + at) * kei_p + (t - im * at) * kei_m +
                     (-im * t - at) * ker_p + (t + im * at) * ker_m);
  }
  return psi;
}

DecayDiagnostics decay_time(const std::vector<double>& tau,
                            const std::vector<double>& intensity) {
  if (tau.size() != intensity.size() || tau.size() < 16)
    throw std::invalid_argument("decay_time: trace too short");
  const std::size_t n = tau.size();
  std::size_t ipk = 0;
  for (std::size_t j = 1; j < n; ++j)
    if (intensity[j] > intensity[ipk]) ipk = j;

  // Pick the flank carrying more weight; measure delays from the peak.
  double right = 0, left = 0;
  for (std::size_t j = ipk; j < n; ++j) right += intensity[j];
  for (std::size_t j = 0; j <= ipk; ++j) left += intensity[j];
  std::vector<double> side, ts;
  if (right >= left) {
    for (std::size_t j = ipk; j < n; ++j) {
      side.push_back(intensity[j]);
      ts.push_back(tau[j] - tau[ipk]);
    }
  } else {
    for (std::size_t j = ipk + 1; j-- > 0;) {
      side.push_back(intensity[j]);
      ts.push_back(-(tau[j] - tau[ipk]));
    }
  }
  if (side.size() < 8)
    throw std::runtime_error("decay_time: flank too short for a fit");

  // The peak bin itself can carry truncation ringing; reference the level
  // from the next few samples instead.
  double pk = 0.0;
  for (std::size_t j = 1; j < std::min<std::size_t>(6, side.size()); ++j)
    pk = std::max(pk, side[j]);
  auto first_below = [&](double level) {
    for (std::size_t j = 0; j < side.size(); ++j)
      if (side[j] <= level) return j;
    return std::size_t(0);
  };
  std::size_t j0 = first_below(0.9 * pk);
  std::size_t j1 = first_below(std::exp(-1.0) * pk);
  if (j1 <= j0 + 3) j1 = j0 + 4;
  if (j1 >= side.size())
    throw std::runtime_error("decay_time: insufficient decay range");

  // Least-squares line through (ts, log side) over [j0, j1).
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const std::size_t m = j1 - j0;
  std::vector<double> ly(m);
  for (std::size_t j = 0; j < m; ++j) {
    if (side[j0 + j] <= 0.0)
      throw std::runtime_error("decay_time: nonpositive intensity in window");
    ly[j] = std::log(side[j0 + j]);
    sx += ts[j0 + j];
    sy += ly[j];
    sxx += ts[j0 + j] * ts[j0 + j];
    sxy += ts[j0 + j] * ly[j];
  }
  const double denom = m * sxx - sx * sx;
  const double slope = (m * sxy - sx * sy) / denom;
  const double icpt = (sy - slope * sx) / m;
  double rss = 0;
  for (std::size_t j = 0; j < m; ++j) {
    const double r = ly[j] - (icpt + slope * ts[j0 + j]);
    rss += r * r;
  }
  DecayDiagnostics d;
  d.tau_d = -1.0 / slope;
  d.window_lo = ts[j0];
  d.window_hi = ts[j1 - 1];
  d.residual_rms = std::sqrt(rss / m);
  d.e_crossing = ts[j1];
  return d;
}

DecayDiagnostics decay_time(const CorrelationTrace& trace) {
  std::vector<double> intensity(trace.psi.size());
  for (std::size_t j = 0; j < trace.psi.size(); ++j)
    intensity[j] = std::norm(trace.psi[j]);
  return decay_time(trace.tau, intensity);
}

double analytic_decay_time(const LevelScheme& scheme, double alpha) {
  const double g31 = scheme.gamma31;
  const double u = alpha * g31 / 4.0;
  const int n = 400000;
  const double t0 = 1e-7, t1 = 12.0 / u + 4.0;
  std::vector<double> t(n), f(n);
  int jpk = 0;
  for (int j = 0; j < n; ++j) {
    t[j] = t0 + (t1 - t0) * j / (n - 1.0);
    const double b = std::cyl_bessel_j(1.0, 2.0 * std::sqrt(u * t[j]));
    f[j] = std::exp(-g31 * t[j]) * b * b / t[j];
    if (f[j] > f[jpk]) jpk = j;
  }
  const double pk = f[jpk];
  auto first_below = [&](double level) {
    for (int j = jpk; j < n; ++j)
      if (f[j] <= level) return j;
    return n - 1;
  };
  const int j0 = first_below(0.9 * pk);
  const int j1 = first_below(std::exp(-1.0) * pk);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int m = j1 - j0;
  for (int j = j0; j < j1; ++j) {
    const double y = std::log(f[j]);
    sx += t[j];
    sy += y;
    sxx += t[j] * t[j];
    sxy += t[j] * y;
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return -1.0 / slope;
}

NonclassicalityMetrics metrics(const LevelScheme& scheme,
                               const DriveConfig& drive,
                               const FrequencyGrid& grid) {
  KernelTrace kt = kernel_trace(scheme, drive, grid);
  CorrelationTrace tr = trace_from_kernel(kt);
  NonclassicalityMetrics nm;
  // Field autocorrelations at zero delay from the total spectral densities:
  // g2(0) = 1 + |g1(0)|^2 with g1(0) = (1/R) int density d omega = 1.
  const double g1s = trapezoid_rate(grid, kt.s_total) / tr.r_s;
  const double g1i = trapezoid_rate(grid, kt.i_total) / tr.r_i;
  nm.g2ss0 = 1.0 + g1s * g1s;
  nm.g2ii0 = 1.0 + g1i * g1i;
  // g2si at tau = 0 (exact sample on the conjugate grid).
  std::size_t j0 = 0;
  for (std::size_t j = 0; j < tr.tau.size(); ++j)
    if (std::abs(tr.tau[j]) < std::abs(tr.tau[j0])) j0 = j;
  const double g2si0 = tr.g2si[j0];
  nm.r_sb = g2si0 - 1.0;
  nm.f_csi = g2si0 * g2si0 / (nm.g2ss0 * nm.g2ii0);
  // Correlated areas by trapezoid over the delay grid.
  const double dtau = tr.tau[1] - tr.tau[0];
  double ipsi = 0;
  for (const cplx& p : tr.psi) ipsi += std::norm(p);
  ipsi *= dtau;
  nm.a_s = ipsi / tr.r_s;
  nm.a_i = ipsi / tr.r_i;
  return nm;
}

double superradiant_tau(double alpha, double gamma31) {
  if (alpha < 0) throw std::domain_error("superradiant_tau: alpha >= 0");
  return (1.0 / gamma31) / (1.0 + alpha / 4.0);
}

double thermal_pn(double mean, int n) {
  if (mean < 0 || n < 0) throw std::domain_error("thermal_pn: negative input");
  return std::pow(mean, n) / std::pow(1.0 + mean, n + 1);
}

}  // namespace sfwm
