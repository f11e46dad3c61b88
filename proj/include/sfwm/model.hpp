#pragma once
// Unit conventions, atomic level schemes, drive configurations and the named
// presets used throughout the simulator.
//
// Internal unit system: every rate and frequency is expressed in units of the
// reference linewidth Gamma (gamma_unit rad/s), every time in 1/Gamma, and the
// medium length is normalized to L = 1.  Physical lengths enter only through
// the optional free-propagation phase term.

#include <array>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace sfwm {

using cplx = std::complex<double>;
inline constexpr double pi = 3.14159265358979323846;

// Reference linewidth Gamma in rad/s (2*pi*6 MHz).
inline constexpr double gamma_unit = 2.0 * pi * 6.0e6;

// Unit conversions performed once at the boundary.
inline double rate_to_si(double rate_gamma) { return rate_gamma * gamma_unit; }
inline double time_to_ns(double t_gamma) { return t_gamma / gamma_unit * 1e9; }

// Decay rates, Clebsch-Gordan weights, wavelengths and mass for one atomic
// configuration.  Decay rates are in Gamma units.
struct LevelScheme {
  std::string name;
  double gamma21 = 0, gamma31 = 0, gamma42 = 0, gamma43 = 0;  // Gamma_jk
  double cg2_21 = 0, cg2_31 = 0, cg2_42 = 0, cg2_43 = 0;      // squared CG
  double lambda_s = 0, lambda_i = 0;  // signal / idler wavelengths [m]
  double lambda_c = 0, lambda_d = 0;  // pump wavelengths [m]
  double mass = 0;                    // atomic mass [kg]

  double s_lambda() const {
    double r = lambda_s / lambda_i;
    return r * r;
  }
  // Dephasing rates gamma_jk derived from the decay rates.
  double g21() const { return gamma21; }
  double g31() const { return gamma31; }
  double g32() const { return gamma31 + gamma21; }
  double g41() const { return gamma42 + gamma43; }
  double g42() const { return gamma42 + gamma43 + gamma21; }
  double g43() const { return gamma42 + gamma43 + gamma31; }
  // Effective coupling rates (CG^2-weighted decay rates).  These enter the
  // field-coupling prefactors; dephasing and population dynamics use the
  // bare rates above.
  double g43c() const { return gamma43 * cg2_43; }
  double g31c() const { return gamma31 * cg2_31; }
};

enum class Geometry { forward, backward };
enum class PopulationModel { gsa, exact };

// Drive parameters.  Rabi frequencies and detunings in Gamma units, optical
// depth alpha on the idler transition.
struct DriveConfig {
  cplx omega_c = 1.0, omega_d = 1.0;
  double delta1 = -50.0, delta2 = 0.0;
  double od = 10.0;
  double dk_l = 0.0;  // phase mismatch Delta_k * L (dimensionless)
  Geometry geometry = Geometry::forward;
  PopulationModel population_model = PopulationModel::gsa;
  double length = 0.01;             // physical medium length [m]
  bool include_free_phase = false;  // -i*omega/c phase accumulation term

  // Free-propagation phase rate per unit (normalized) length, in Gamma units:
  // omega * gamma_unit * length / c.
  double free_phase_factor() const {
    return include_free_phase ? gamma_unit * length / 299792458.0 : 0.0;
  }
  // GSA is a large-detuning approximation; warn when the drive is too strong.
  bool gsa_valid() const {
    double om = std::max(std::abs(omega_c), std::abs(omega_d));
    return om <= std::abs(delta1) / 5.0;
  }
};

// Uniform midpoint-staggered frequency grid: omega_j = -W + (j + 1/2) dw,
// so omega = 0 is never sampled exactly.
struct FrequencyGrid {
  int n = 0;
  double half_width = 0;

  static FrequencyGrid make(int n, double half_width) {
    if (n < 2 || (n & (n - 1)) != 0)
      throw std::invalid_argument("FrequencyGrid: n must be a power of two");
    if (half_width <= 0)
      throw std::invalid_argument("FrequencyGrid: half_width must be > 0");
    return FrequencyGrid{n, half_width};
  }
  double spacing() const { return 2.0 * half_width / n; }
  double omega(int j) const { return -half_width + (j + 0.5) * spacing(); }
  std::vector<double> samples() const {
    std::vector<double> w(n);
    for (int j = 0; j < n; ++j) w[j] = omega(j);
    return w;
  }
};

// Named presets.  Throws with the list of valid names on an unknown preset.
std::pair<LevelScheme, DriveConfig> preset(const std::string& name);
std::vector<std::string> preset_names();

// All six dephasing rates, keyed "21","31","32","41","42","43".
std::map<std::string, double> decoherence_table(const LevelScheme& s);

}  // namespace sfwm
