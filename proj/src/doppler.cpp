#include "sfwm/doppler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sfwm/kernels.hpp"
#include "sfwm/specfun.hpp"
#include "sfwm/steady_state.hpp"

namespace sfwm {

namespace {

const cplx im(0.0, 1.0);
constexpr double k_boltzmann = 1.380649e-23;  // J/K

// Same fixed ii-channel weight as the cold signal-side noise.
constexpr double k_su_ii_weight = 2.0;

double iee_of(double g) {
  const double x = 2.0 * g;
  if (std::abs(x) < 1e-8) return 1.0 - 0.5 * x;
  return -std::expm1(-x) / x;
}

}  // namespace

double thermal_velocity(double temperature, double mass) {
  if (temperature <= 0) throw std::domain_error("thermal_velocity: T > 0");
  if (mass <= 0) throw std::domain_error("thermal_velocity: mass > 0");
  return std::sqrt(k_boltzmann * temperature / mass);
}

VelocityGrid velocity_grid(double temperature, double mass, int n_nodes) {
  if (n_nodes < 8) throw std::invalid_argument("velocity_grid: n_nodes >= 8");
  const double vth = thermal_velocity(temperature, mass);
  Quadrature q = gauss_hermite(n_nodes);
  VelocityGrid g;
  g.temperature = temperature;
  g.mass = mass;
  g.nodes.resize(n_nodes);
  g.weights.resize(n_nodes);
  double wsum = 0;
  for (int k = 0; k < n_nodes; ++k) {
    g.nodes[k] = std::sqrt(2.0) * vth * q.nodes[k];
    wsum += q.weights[k];
  }
  for (int k = 0; k < n_nodes; ++k) g.weights[k] = q.weights[k] / wsum;
  return g;
}

VelocityGrid dense_velocity_grid(const LevelScheme& scheme,
                                 const DriveConfig& drive,
                                 double temperature) {
  const double vth = thermal_velocity(temperature, scheme.mass);
  const double kc = wavenumber_c(scheme), kd = wavenumber_d(scheme),
               ki = wavenumber_i(scheme);
  (void)drive;
  // Broad grid resolving the narrow idler resonance (width gamma31/2ki in
  // velocity) under the Gaussian envelope, capped in size.
  const double pole_width = scheme.g31() / (2.0 * ki);
  const double span = 6.0 * vth;
  const double dv = std::min(pole_width / 2.5, vth / 4.0);
  int nb = std::min(int(2.0 * span / dv) + 1, 4001);
  std::vector<double> v;
  v.reserve(nb + 129);
  for (int j = 0; j < nb; ++j) v.push_back(-span + 2.0 * span * j / (nb - 1));
  // Core refinement around v = 0 for the two-photon resonance filter.
  const double wc = scheme.g41() / (2.0 * (kc + kd));
  for (int j = 0; j < 129; ++j)
    v.push_back(-8.0 * wc + 16.0 * wc * j / 128.0);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());

  const std::size_t n = v.size();
  VelocityGrid g;
  g.temperature = temperature;
  g.mass = scheme.mass;
  g.nodes = v;
  g.weights.resize(n);
  double wsum = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const double tw = (j == 0)       ? 0.5 * (v[1] - v[0])
                      : (j == n - 1) ? 0.5 * (v[n - 1] - v[n - 2])
                                     : 0.5 * (v[j + 1] - v[j - 1]);
    const double p = std::exp(-v[j] * v[j] / (2.0 * vth * vth)) /
                     (std::sqrt(2.0 * pi) * vth);
    g.weights[j] = p * tw;
    wsum += g.weights[j];
  }
  for (double& w : g.weights) w /= wsum;
  return g;
}

cplx gauss_pole_moment(double vth, cplx z) {
  const double s = std::sqrt(2.0) * vth;
  const cplx zz = z / s;
  const double sgn = (zz.imag() > 0.0) ? 1.0 : -1.0;
  return sgn * im * std::sqrt(pi) / s * faddeeva_w(sgn * zz);
}

WarmCoefficients averaged_coefficients(const LevelScheme& scheme,
                                       const DriveConfig& drive,
                                       double temperature, double omega,
                                       int idler_shift_sign) {
  const double vth = thermal_velocity(temperature, scheme.mass);
  const double kc = wavenumber_c(scheme), kd = wavenumber_d(scheme),
               ki = wavenumber_i(scheme);
  const double kpm =
      (drive.geometry == Geometry::forward) ? kc + kd : kc - kd;
  const double s3 = idler_shift_sign;
  const double a = drive.od;
  const double g31 = scheme.g31(), g41 = scheme.g41();
  const double g31b = scheme.gamma31, g43c = scheme.g43c();
  const double sl = scheme.s_lambda();
  const double phi = drive.free_phase_factor();

  const cplx z1 = -drive.delta1 / kc;
  const cplx z3 = (g31 - 2.0 * im * omega) / (2.0 * im * s3 * ki);
  const cplx i3 = gauss_pole_moment(vth, z3);

  WarmCoefficients c;
  c.gamma_i = a * g31b / 2.0 * i3 / (-2.0 * im * s3 * ki) + im * drive.dk_l -
              im * omega * phi;
  const cplx i1 = gauss_pole_moment(vth, z1);
  for (double sg : {-1.0, +1.0}) {
    const cplx z2 = (g41 + sg * 2.0 * im * drive.delta2) /
                    (-sg * 2.0 * im * kpm);
    const cplx i2 = gauss_pole_moment(vth, z2);
    const cplx sum = i1 / ((z1 - z2) * (z1 - z3)) +
                     i2 / ((z2 - z1) * (z2 - z3)) +
                     i3 / ((z3 - z1) * (z3 - z2));
    const cplx pref = im * a * std::sqrt(sl * g43c * g31b) / 4.0;
    const cplx oo = (sg < 0) ? drive.omega_c * drive.omega_d
                             : std::conj(drive.omega_c * drive.omega_d);
    const cplx kappa =
        pref * oo * sum /
        (kc * (sg * 2.0 * im * kpm) * (-2.0 * im * s3 * ki));
    if (sg < 0)
      c.kappa_s = kappa;
    else
      c.kappa_i = kappa;
  }
  return c;
}

TransferMatrix averaged_transfer(const LevelScheme& scheme,
                                 const DriveConfig& drive,
                                 const VelocityGrid& vgrid, double omega) {
  ParametricCoefficients avg;
  avg.gamma_i = avg.kappa_s = avg.kappa_i = avg.g_s = 0.0;
  for (std::size_t m = 0; m < vgrid.nodes.size(); ++m) {
    auto [c, z] = doppler_parametric(scheme, drive, vgrid.nodes[m], omega);
    const double w = vgrid.weights[m];
    avg.gamma_i += w * c.gamma_i;
    avg.kappa_s += w * c.kappa_s;
    avg.kappa_i += w * c.kappa_i;
    avg.g_s += w * c.g_s;
  }
  return transfer_gsa(avg);
}

TransferMatrix averaged_transfer_exact(const LevelScheme& scheme,
                                       const DriveConfig& drive,
                                       double temperature, double omega) {
  WarmCoefficients w = averaged_coefficients(scheme, drive, temperature, omega);
  ParametricCoefficients c;
  c.gamma_i = w.gamma_i;
  c.kappa_s = w.kappa_s;
  c.kappa_i = w.kappa_i;
  c.g_s = 0.0;
  return transfer_gsa(c);
}

WarmNoiseKernels warm_noise_kernels(const LevelScheme& scheme,
                                    const DriveConfig& drive,
                                    double temperature,
                                    const FrequencyGrid& grid,
                                    int idler_shift_sign) {
  const std::size_t n = grid.n;
  WarmNoiseKernels out;
  out.grid = grid;
  out.temperature = temperature;
  for (auto* p : {&out.ss, &out.si, &out.is, &out.ii, &out.ssI, &out.siI,
                  &out.iiI})
    p->assign(n, cplx(0.0, 0.0));

  const double kc = wavenumber_c(scheme), kd = wavenumber_d(scheme),
               ki = wavenumber_i(scheme);
  const double kpm =
      (drive.geometry == Geometry::forward) ? kc + kd : kc - kd;
  const double s3 = idler_shift_sign;

  DriveConfig unit = drive;
  unit.od = 1.0;  // kernels are linear in alpha; evaluate at alpha = 1

  VelocityGrid vg = dense_velocity_grid(scheme, drive, temperature);
  std::vector<cplx> zs[3], zi[3];
  for (int k = 0; k < 3; ++k) {
    zs[k].resize(n);
    zi[k].resize(n);
  }
  for (std::size_t q = 0; q < vg.nodes.size(); ++q) {
    const double v = vg.nodes[q];
    const double wq = vg.weights[q];
    const double d1p = drive.delta1 + kc * v;
    const double d2p = drive.delta2 + kpm * v;

    DriveConfig shifted = drive;
    shifted.delta1 = d1p;
    shifted.delta2 = d2p;
    SteadyState st = solve_steady(scheme, shifted);
    DiffusionPair dp = diffusion(scheme, st);
    cplx d1m[9], d2m[9];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        d1m[3 * i + j] = dp.d_kj_jk(i, j);
        d2m[3 * i + j] = dp.d_jk_kj(i, j);
      }

    for (std::size_t j = 0; j < n; ++j) {
      const double wp = grid.omega(j) + s3 * ki * v;
      NoiseCoefficientSet z = gsa_noise_shifted(scheme, unit, wp, d1p, d2p);
      for (int k = 0; k < 3; ++k) {
        zs[k][j] = z.zeta_s[k];
        zi[k][j] = z.zeta_i[k];
      }
    }
    const cplx* pzs[3] = {zs[0].data(), zs[1].data(), zs[2].data()};
    const cplx* pzi[3] = {zi[0].data(), zi[1].data(), zi[2].data()};
    using kernels::bilinear_accum;
    bilinear_accum(pzs, pzs, d1m, wq, n, out.ss.data());
    bilinear_accum(pzs, pzi, d1m, wq, n, out.si.data());
    bilinear_accum(pzi, pzs, d1m, wq, n, out.is.data());
    bilinear_accum(pzi, pzi, d1m, wq, n, out.ii.data());
    bilinear_accum(pzs, pzs, d2m, wq, n, out.ssI.data());
    bilinear_accum(pzs, pzi, d2m, wq, n, out.siI.data());
    bilinear_accum(pzi, pzi, d2m, wq, n, out.iiI.data());
  }
  // The idler-side densities use the row-ordered form z_a^T D conj(z_b),
  // the conjugate of the accumulated bilinears (D2 is real).
  for (auto* p : {&out.ssI, &out.siI, &out.iiI})
    for (cplx& x : *p) x = std::conj(x);
  return out;
}

KernelTrace warm_kernel_trace(const LevelScheme& scheme,
                              const DriveConfig& drive, double temperature,
                              const FrequencyGrid& grid,
                              const WarmNoiseKernels* pre) {
  WarmNoiseKernels local;
  if (pre == nullptr) {
    local = warm_noise_kernels(scheme, drive, temperature, grid);
    pre = &local;
  } else if (pre->grid.n != grid.n ||
             pre->grid.half_width != grid.half_width ||
             pre->temperature != temperature) {
    throw std::invalid_argument(
        "warm_kernel_trace: precomputed kernels built on a different grid");
  }

  const std::size_t n = grid.n;
  const double a = drive.od;
  KernelTrace t;
  t.grid = grid;
  t.pair_kernel.resize(n);
  t.s_total.resize(n);
  t.i_total.resize(n);
  const double inv2pi = 1.0 / (2.0 * pi);
  for (std::size_t j = 0; j < n; ++j) {
    WarmCoefficients wc =
        averaged_coefficients(scheme, drive, temperature, grid.omega(j));
    const cplx gi = wc.gamma_i;
    const cplx e = std::exp(-gi);
    const cplx rs = wc.kappa_s / gi, rki = wc.kappa_i / gi;
    const cplx ie = expm1_over(-gi);
    const cplx iec = std::conj(ie);
    const double iee = iee_of(gi.real());
    const cplx b1 = rs * (e - 1.0), c1 = rki * (e - 1.0);

    const cplx kc1 = std::conj(rki) * (iec - 1.0);
    const cplx kcb = std::conj(rki) * rs * (iee - iec - ie + 1.0);
    t.pair_kernel[j] =
        b1 * std::conj(e) +
        a * (pre->ss[j] * kc1 + pre->si[j] * kcb + pre->is[j] * iec +
             pre->ii[j] * rs * (iee - iec));

    const cplx ib = rs * (ie - 1.0);
    const double ibb = std::norm(rs) * (iee - (ie + iec).real() + 1.0);
    const double su =
        a * (pre->ss[j].real() + 2.0 * std::real(pre->si[j] * ib) +
             k_su_ii_weight * pre->ii[j].real() * ibb);

    const double icc = std::norm(rki) * (iee - (ie + iec).real() + 1.0);
    const cplx icd = rki * (iee - iec);
    const double iu =
        a * (pre->ssI[j].real() * icc + 2.0 * std::real(pre->siI[j] * icd) +
             pre->iiI[j].real() * iee);

    t.s_total[j] = (std::norm(b1) + std::max(su, 0.0)) * inv2pi;
    t.i_total[j] = (std::norm(c1) + std::max(iu, 0.0)) * inv2pi;
  }
  return t;
}

namespace {

double warm_quad_scale(const LevelScheme& s, const DriveConfig& d,
                       double temperature) {
  const double vth = thermal_velocity(temperature, s.mass);
  const double kpm = wavenumber_c(s) + wavenumber_d(s);
  return std::max({2.0, d.od / 8.0, 3.0 * kpm * vth});
}

}  // namespace

std::pair<double, double> warm_paired_rates(const LevelScheme& scheme,
                                            const DriveConfig& drive,
                                            double temperature) {
  const double sc = warm_quad_scale(scheme, drive, temperature);
  auto density = [&](double w, bool idler) {
    TransferMatrix t = averaged_transfer_exact(scheme, drive, temperature, w);
    return std::norm(idler ? t.c1 : t.b1);
  };
  const double rs = detail::real_line_quad(
      [&](double w) { return density(w, false); }, sc);
  const double ri = detail::real_line_quad(
      [&](double w) { return density(w, true); }, sc);
  return {rate_to_si(rs / (2.0 * pi)), rate_to_si(ri / (2.0 * pi))};
}

SpectralDecomposition warm_decompose(const LevelScheme& scheme,
                                     const DriveConfig& drive,
                                     double temperature,
                                     const FrequencyGrid& grid,
                                     const WarmNoiseKernels* pre) {
  KernelTrace kt = warm_kernel_trace(scheme, drive, temperature, grid, pre);
  SpectralDecomposition d;
  d.grid = grid;
  const std::size_t n = grid.n;
  d.s_paired.resize(n);
  d.i_paired.resize(n);
  d.s_unpaired.resize(n);
  d.i_unpaired.resize(n);
  const double inv2pi = 1.0 / (2.0 * pi);
  double su_sum = 0, iu_sum = 0;
  for (std::size_t j = 0; j < n; ++j) {
    TransferMatrix t =
        averaged_transfer_exact(scheme, drive, temperature, grid.omega(j));
    d.s_paired[j] = std::norm(t.b1) * inv2pi;
    d.i_paired[j] = std::norm(t.c1) * inv2pi;
    d.s_unpaired[j] = std::max(kt.s_total[j] - d.s_paired[j], 0.0);
    d.i_unpaired[j] = std::max(kt.i_total[j] - d.i_paired[j], 0.0);
    su_sum += d.s_unpaired[j];
    iu_sum += d.i_unpaired[j];
  }
  auto [rsp, rip] = warm_paired_rates(scheme, drive, temperature);
  d.r_sp = rsp;
  d.r_ip = rip;
  d.r_su = rate_to_si(su_sum * grid.spacing());
  d.r_iu = rate_to_si(iu_sum * grid.spacing());
  d.r_s = d.r_sp + d.r_su;
  d.r_i = d.r_ip + d.r_iu;
  return d;
}

CorrelationTrace warm_correlation(const LevelScheme& scheme,
                                  const DriveConfig& drive,
                                  double temperature,
                                  const FrequencyGrid& grid,
                                  const WarmNoiseKernels* pre) {
  return trace_from_kernel(
      warm_kernel_trace(scheme, drive, temperature, grid, pre));
}

FrequencyGrid warm_grid(const LevelScheme& scheme, const DriveConfig& drive,
                        double temperature, int n) {
  const double vth = thermal_velocity(temperature, scheme.mass);
  const double kpm = wavenumber_c(scheme) + wavenumber_d(scheme);
  const double w = std::max(
      {600.0, 3.0 * drive.od * scheme.gamma31, 36.0 * kpm * vth});
  return FrequencyGrid::make(n, w);
}

double fit_decay_scaling(const std::vector<double>& od,
                         const std::vector<double>& tau_d) {
  if (od.size() != tau_d.size() || od.size() < 3)
    throw std::invalid_argument("fit_decay_scaling: need >= 3 points");
  const std::size_t n = od.size();
  // SSE of ln tau_d against ln(tau31/(1+x OD)); the optimal ln tau31 for a
  // given x is the mean residual, so the search is one-dimensional in x.
  auto sse = [&](double lx) {
    const double x = std::exp(lx);
    double mu = 0;
    std::vector<double> r(n);
    for (std::size_t j = 0; j < n; ++j) {
      r[j] = std::log(tau_d[j]) + std::log1p(x * od[j]);
      mu += r[j];
    }
    mu /= n;
    double s = 0;
    for (double v : r) s += (v - mu) * (v - mu);
    return s;
  };
  // Golden-section search over ln x.
  double a = std::log(1e-6), b = std::log(10.0);
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = sse(c), fd = sse(d);
  for (int it = 0; it < 200; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = sse(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = sse(d);
    }
  }
  return std::exp(0.5 * (a + b));
}

}  // namespace sfwm
