#pragma once

#include <utility>
#include <vector>

#include "sfwm/coefficients.hpp"
#include "sfwm/correlations.hpp"
#include "sfwm/model.hpp"
#include "sfwm/propagation.hpp"
#include "sfwm/spectra.hpp"

namespace sfwm {

// Maxwell-Boltzmann velocity quadrature.
struct VelocityGrid {
  std::vector<double> nodes;    // m/s
  std::vector<double> weights;  // sum to 1
  double temperature = 0;       // K
  double mass = 0;              // kg
};

// Gauss-Hermite velocity grid: v = sqrt(2 k_B T / M) x, weights normalized.
VelocityGrid velocity_grid(double temperature, double mass, int n_nodes);

// Composite trapezoid grid dense enough to resolve the narrow idler
// velocity resonance inside the Gaussian envelope; used for the noise
// kernels where Gauss-Hermite nodes undersample the pole.
VelocityGrid dense_velocity_grid(const LevelScheme& scheme,
                                 const DriveConfig& drive,
                                 double temperature);

// I(z) = int p(v)/(v - z) dv for a centered Gaussian of width vth,
// evaluated with the Faddeeva function.
cplx gauss_pole_moment(double vth, cplx z);

// One-dimensional thermal speed sqrt(k_B T / M).
double thermal_velocity(double temperature, double mass);

struct WarmCoefficients {
  cplx gamma_i, kappa_s, kappa_i;
};

// Velocity-averaged parametric coefficients, exact Gaussian averages via
// partial fractions over the three simple poles in v.  The idler Doppler
// shift enters as omega -> omega + s3 ki v with s3 = idler_shift_sign.
WarmCoefficients averaged_coefficients(const LevelScheme& scheme,
                                       const DriveConfig& drive,
                                       double temperature, double omega,
                                       int idler_shift_sign = -1);

// Transfer matrix built from node-sum averages of the per-velocity GSA
// coefficients over the given grid.
TransferMatrix averaged_transfer(const LevelScheme& scheme,
                                 const DriveConfig& drive,
                                 const VelocityGrid& vgrid, double omega);

// Transfer matrix from the exact (Faddeeva) averaged coefficients.
TransferMatrix averaged_transfer_exact(const LevelScheme& scheme,
                                       const DriveConfig& drive,
                                       double temperature, double omega);

// Velocity-averaged noise quadratic forms on a frequency grid, evaluated at
// unit optical depth (they are linear in alpha).  ss/si/is/ii carry the
// signal-side diffusion ordering; ssI/siI/iiI the idler-side ordering.
struct WarmNoiseKernels {
  FrequencyGrid grid;
  double temperature = 0;
  std::vector<cplx> ss, si, is, ii;
  std::vector<cplx> ssI, siI, iiI;
};

WarmNoiseKernels warm_noise_kernels(const LevelScheme& scheme,
                                    const DriveConfig& drive,
                                    double temperature,
                                    const FrequencyGrid& grid,
                                    int idler_shift_sign = -1);

// Warm analogues of the cold spectral/correlation pipeline.  When a
// precomputed kernel set is supplied it is reused (it is alpha-independent).
KernelTrace warm_kernel_trace(const LevelScheme& scheme,
                              const DriveConfig& drive, double temperature,
                              const FrequencyGrid& grid,
                              const WarmNoiseKernels* pre = nullptr);

SpectralDecomposition warm_decompose(const LevelScheme& scheme,
                                     const DriveConfig& drive,
                                     double temperature,
                                     const FrequencyGrid& grid,
                                     const WarmNoiseKernels* pre = nullptr);

CorrelationTrace warm_correlation(const LevelScheme& scheme,
                                  const DriveConfig& drive,
                                  double temperature,
                                  const FrequencyGrid& grid,
                                  const WarmNoiseKernels* pre = nullptr);

// Paired rates (R'_{s,p}, R'_{i,p}) in s^-1 by adaptive quadrature of the
// averaged transfer entries.  The warm pairing rate is R'_{i,p}.
std::pair<double, double> warm_paired_rates(const LevelScheme& scheme,
                                            const DriveConfig& drive,
                                            double temperature);

// Suggested frequency grid for warm runs (wide enough for the Doppler
// pedestal and the collective flank).
FrequencyGrid warm_grid(const LevelScheme& scheme, const DriveConfig& drive,
                        double temperature, int n = 1 << 15);

// Fit tau_d(OD) = tau31/(1 + x OD) in log space; returns x.
double fit_decay_scaling(const std::vector<double>& od,
                         const std::vector<double>& tau_d);

}  // namespace sfwm
