#pragma once
// Frequency-domain coefficient sets for the coupled signal/idler propagation
// equations: parametric coefficients, Langevin-noise coefficients, diffusion
// matrices, in GSA / exact-population / backward / Doppler variants.

#include <Eigen/Dense>
#include <array>

#include "sfwm/model.hpp"
#include "sfwm/steady_state.hpp"

namespace sfwm {

// Per-unit-length parametric coefficients at one frequency (L = 1 units).
struct ParametricCoefficients {
  cplx gamma_i, kappa_s, kappa_i, g_s;
};

// Langevin-noise coefficients; index order {31, 32, 34}.
struct NoiseCoefficientSet {
  std::array<cplx, 3> zeta_s{}, zeta_i{};
};

// Diffusion coefficient matrices from the Einstein relation.
//   d_kj_jk: rows {13,23,43}, cols {31,32,34}
//   d_jk_kj: rows {31,32,34}, cols {13,23,43}
struct DiffusionPair {
  Eigen::Matrix3cd d_kj_jk = Eigen::Matrix3cd::Zero();
  Eigen::Matrix3cd d_jk_kj = Eigen::Matrix3cd::Zero();
};

// GSA parametric coefficients at frequency w (Gamma units); optionally with
// explicitly substituted detunings (used for per-velocity evaluation).
ParametricCoefficients gsa_parametric(const LevelScheme& s, const DriveConfig& d,
                                      double w);
ParametricCoefficients gsa_parametric_shifted(const LevelScheme& s,
                                              const DriveConfig& d, double w,
                                              double d1, double d2);

// GSA Langevin-noise coefficients (and shifted-detuning variant).
NoiseCoefficientSet gsa_noise(const LevelScheme& s, const DriveConfig& d,
                              double w);
NoiseCoefficientSet gsa_noise_shifted(const LevelScheme& s, const DriveConfig& d,
                                      double w, double d1, double d2);

// Exact-population coefficients built from a full steady state.
std::pair<ParametricCoefficients, NoiseCoefficientSet> exact_parametric(
    const LevelScheme& s, const DriveConfig& d, const SteadyState& st, double w);

// Backward-geometry coefficients: signal set identical to forward, idler set
// with a global sign flip (gamma_i, kappa_i, zeta_i -> negated; Delta_k term
// enters with opposite sign).
std::pair<ParametricCoefficients, NoiseCoefficientSet> backward_parametric(
    const LevelScheme& s, const DriveConfig& d, double w);

// Doppler-shifted detunings for velocity v (m/s):
//   Delta'_1 = Delta1 + kc v
//   Delta'_2 = Delta2 + (kc +/- kd) v  (+ forward, - backward)
//   Delta'_3 = idler_shift_sign * ki v
// The idler shift sign is a convention knob; the default (-1) reproduces the
// warm-ensemble observables (see doppler module).
std::array<double, 3> doppler_detunings(const LevelScheme& s,
                                        const DriveConfig& d, double v,
                                        int idler_shift_sign = -1);

// Per-velocity coefficients with Doppler-shifted detunings.
std::pair<ParametricCoefficients, NoiseCoefficientSet> doppler_parametric(
    const LevelScheme& s, const DriveConfig& d, double v, double w,
    int idler_shift_sign = -1);

// Diffusion matrices for a given steady state (exact populations required).
DiffusionPair diffusion(const LevelScheme& s, const SteadyState& st);

// Pump/idler wave numbers in Gamma units per (m/s): k = 2 pi / lambda / Gamma.
double wavenumber_c(const LevelScheme& s);
double wavenumber_d(const LevelScheme& s);
double wavenumber_i(const LevelScheme& s);

}  // namespace sfwm
