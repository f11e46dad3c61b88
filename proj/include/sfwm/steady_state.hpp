#pragma once
// Zeroth-order steady state of the four-level atom (expectation values of the
// slowly varying sigma operators) and its large-detuning closed form.

#include <Eigen/Dense>
#include <optional>

#include "sfwm/model.hpp"

namespace sfwm {

// Steady-state expectation values <sigma_jk>, 1-based level labels mapped to
// 0-based matrix indices: sigma(j-1, k-1).
struct SteadyState {
  Eigen::Matrix4cd sigma = Eigen::Matrix4cd::Zero();

  cplx s(int j, int k) const { return sigma(j - 1, k - 1); }
  double population(int j) const { return sigma(j - 1, j - 1).real(); }
  bool hermitian(double tol = 1e-12) const {
    return (sigma - sigma.adjoint()).cwiseAbs().maxCoeff() < tol;
  }
  double trace_error() const { return std::abs(sigma.trace() - cplx(1.0)); }
};

// Optional Doppler replacement (Delta'_1, Delta'_2, Delta'_3); the steady
// state involves only the first two, the third shifts field frequencies.
struct DopplerShift {
  double d1p = 0, d2p = 0, d3p = 0;
};

// Unique steady state of the linear system built from the zeroth-order
// equations of motion, their adjoints, and the trace constraint.
SteadyState solve_steady(const LevelScheme& s, const DriveConfig& d,
                         std::optional<DopplerShift> shift = std::nullopt);

// Large-detuning (ground-state approximation) closed form: sigma11 = 1,
// sigma12 = -Omega_c/(2 Delta1), sigma14 = -i Omega_c Omega_d /
// (2 gamma41 Delta1 - 4 i Delta1 Delta2), other entries zero.
SteadyState gsa_steady(const LevelScheme& s, const DriveConfig& d);

}  // namespace sfwm
