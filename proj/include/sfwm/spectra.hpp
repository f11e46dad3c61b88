#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "sfwm/coefficients.hpp"
#include "sfwm/model.hpp"

namespace sfwm {

// Frequency-resolved decomposition of the signal/idler output into paired
// and unpaired (noise-seeded) components.  Densities are per unit omega
// (Gamma units) including the 1/2pi normalization; rates are in s^-1.
struct SpectralDecomposition {
  FrequencyGrid grid;
  std::vector<double> s_paired, s_unpaired, i_paired, i_unpaired;
  double r_s = 0, r_i = 0, r_sp = 0, r_ip = 0, r_su = 0, r_iu = 0;
};

// Per-omega spectral kernels shared with the time-domain observables:
// pair_kernel is the full two-photon kernel (transformed to obtain the
// biphoton wavefunction), s_total/i_total are the total spectral densities
// whose transforms give the field autocorrelations.
struct KernelTrace {
  FrequencyGrid grid;
  std::vector<cplx> pair_kernel;
  std::vector<double> s_total, i_total;
};

SpectralDecomposition decompose(const LevelScheme& scheme,
                                const DriveConfig& drive,
                                const FrequencyGrid& grid);

KernelTrace kernel_trace(const LevelScheme& scheme, const DriveConfig& drive,
                         const FrequencyGrid& grid);

// Pairing rate in s^-1 by adaptive quadrature of the paired density.
double pairing_rate(const LevelScheme& scheme, const DriveConfig& drive);

// Closed-form pairing rate: (full error-function form, asymptotic large-OD
// form), both in s^-1.
std::pair<double, double> pairing_rate_analytic(const LevelScheme& scheme,
                                                const DriveConfig& drive);

// (r_ps, r_pi): fraction of the total signal/idler rate that is paired.
std::pair<double, double> pairing_ratios(const SpectralDecomposition& d);

namespace detail {

// Adaptive quadrature over the whole real line via omega = scale * tan(t).
double real_line_quad(const std::function<double(double)>& f, double scale);

// Everything the per-omega evaluation produces; used by both the spectral
// decomposition and the correlation kernels.
struct OmegaEval {
  cplx b1, c1, d1;    // transfer-matrix entries
  double su = 0;      // unpaired signal density (before 1/2pi)
  double iu = 0;      // unpaired idler density (before 1/2pi)
  cplx pair_kernel;   // B1*conj(D1) plus the noise cross term
};

// Caches the exact steady state and diffusion matrices for a drive point.
struct EvalContext {
  LevelScheme scheme;
  DriveConfig drive;
  Eigen::Matrix3cd d1;  // diffusion for the signal-side (kj,jk) ordering
  Eigen::Matrix3cd d2;  // diffusion for the idler-side (jk,kj) ordering
  EvalContext(const LevelScheme& s, const DriveConfig& d);
  OmegaEval eval(double omega) const;
};

}  // namespace detail

}  // namespace sfwm
