#pragma once

#include <vector>

#include "sfwm/model.hpp"
#include "sfwm/spectra.hpp"

namespace sfwm {

// Time-domain two-photon trace.  Delays in 1/Gamma units, sorted ascending;
// r_s/r_i are the total single rates in Gamma units used for normalization.
struct CorrelationTrace {
  std::vector<double> tau;
  std::vector<cplx> psi;
  std::vector<double> g2si;  // 1 + |psi|^2/(r_s r_i)
  double r_s = 0, r_i = 0;
};

struct DecayDiagnostics {
  double tau_d = 0;        // slope-fit 1/e time, 1/Gamma units
  double e_crossing = 0;   // direct 1/e crossing of the fitted flank
  double window_lo = 0;    // fit-window delays relative to the peak
  double window_hi = 0;
  double residual_rms = 0; // rms log-residual of the linear fit
};

struct NonclassicalityMetrics {
  double r_sb = 0;    // signal-to-background ratio g2si(0) - 1
  double f_csi = 0;   // Cauchy-Schwarz surpassing factor
  double a_s = 0;     // correlated area on the signal side
  double a_i = 0;
  double g2ss0 = 0, g2ii0 = 0;
};

// Grid used for decay-time extraction: wide enough that the superradiant
// flank is resolved at large optical depth.
FrequencyGrid correlation_grid(const LevelScheme& scheme,
                               const DriveConfig& drive, int n = 1 << 18);

// Biphoton wavefunction by Fourier transform of the pair kernel:
// psi(tau) = (1/2pi) int e^{i omega tau} K(omega) d omega.
CorrelationTrace wavefunction(const LevelScheme& scheme,
                              const DriveConfig& drive,
                              const FrequencyGrid& grid);

// Trace built from an already-computed kernel (reused by the warm model).
CorrelationTrace trace_from_kernel(const KernelTrace& kt);

// Large-OD closed-form wavefunction (Kelvin functions of the second kind),
// evaluated on the given delays.
std::vector<cplx> analytic_wavefunction(const LevelScheme& scheme,
                                        const DriveConfig& drive,
                                        const std::vector<double>& tau);

// 1/e decay time of an intensity trace by a log-linear fit on the
// heavier-mass flank of the peak.
DecayDiagnostics decay_time(const std::vector<double>& tau,
                            const std::vector<double>& intensity);
DecayDiagnostics decay_time(const CorrelationTrace& trace);

// Decay time of the large-OD analytic intensity profile.
double analytic_decay_time(const LevelScheme& scheme, double alpha);

NonclassicalityMetrics metrics(const LevelScheme& scheme,
                               const DriveConfig& drive,
                               const FrequencyGrid& grid);

// Superradiant scaling time tau_s = (1/Gamma31)/(1 + alpha/4), 1/Gamma units.
double superradiant_tau(double alpha, double gamma31);

// Thermal (geometric) photon-number distribution p(n) = nbar^n/(1+nbar)^{n+1}.
double thermal_pn(double mean, int n);

}  // namespace sfwm
