#include "sfwm/coefficients.hpp"

#include <cmath>

namespace sfwm {

namespace {
const cplx im(0.0, 1.0);
}

double wavenumber_c(const LevelScheme& s) {
  return 2.0 * pi / s.lambda_c / gamma_unit;
}
double wavenumber_d(const LevelScheme& s) {
  return 2.0 * pi / s.lambda_d / gamma_unit;
}
double wavenumber_i(const LevelScheme& s) {
  return 2.0 * pi / s.lambda_i / gamma_unit;
}

ParametricCoefficients gsa_parametric_shifted(const LevelScheme& s,
                                              const DriveConfig& d, double w,
                                              double d1, double d2) {
  if (d1 == 0.0)
    throw std::domain_error("gsa_parametric: Delta1 must be nonzero");
  const double a = d.od;
  const double g31 = s.g31(), g41 = s.g41(), g43 = s.g43();
  const double g31b = s.gamma31, g43c = s.g43c();
  const double sl = s.s_lambda();
  const cplx oc = d.omega_c, od = d.omega_d;
  const cplx den31 = g31 - 2.0 * im * w;
  const double phi = d.free_phase_factor();

  ParametricCoefficients c;
  c.gamma_i = a * g31b / (2.0 * den31) + im * d.dk_l - im * w * phi;
  cplx pref = im * a * std::sqrt(sl * g43c * g31b) / (4.0 * d1 * den31);
  c.kappa_s = pref * oc * od / (g41 - 2.0 * im * d2);
  c.kappa_i = pref * std::conj(oc) * std::conj(od) / (g41 + 2.0 * im * d2);
  c.g_s = -a * sl * g43c * std::norm(oc) * std::norm(od) /
              (8.0 * d1 * d1 * (g41 + 2.0 * im * d2) * den31 *
               (g43 - 2.0 * im * (d2 + w))) -
          im * w * phi;
  return c;
}

ParametricCoefficients gsa_parametric(const LevelScheme& s,
                                      const DriveConfig& d, double w) {
  return gsa_parametric_shifted(s, d, w, d.delta1, d.delta2);
}

NoiseCoefficientSet gsa_noise_shifted(const LevelScheme& s,
                                      const DriveConfig& d, double w,
                                      double d1, double d2) {
  if (d1 == 0.0) throw std::domain_error("gsa_noise: Delta1 must be nonzero");
  const double a = d.od;
  const double g31 = s.g31(), g43 = s.g43();
  const double g31b = s.gamma31, g43c = s.g43c();
  const double sl = s.s_lambda();
  const cplx oc = d.omega_c, od = d.omega_d;
  const cplx den31 = g31 - 2.0 * im * w;
  const cplx den43 = g43 - 2.0 * im * (d2 + w);

  NoiseCoefficientSet z;
  const double rs = std::sqrt(a * sl * g43c);
  const double ri = std::sqrt(a * g31b);
  z.zeta_s[0] = (rs / 2.0) * oc * od / (d1 * den31 * den43);
  z.zeta_s[1] = rs * (-im * od / (2.0 * d1 * den43));
  z.zeta_s[2] = rs * (im / den43);
  z.zeta_i[0] = ri * (-im / den31);
  z.zeta_i[1] = ri * (im * std::conj(oc) / (2.0 * d1 * den31));
  z.zeta_i[2] = ri * (-std::conj(oc) * std::conj(od) / (2.0 * d1 * den31 * den43));
  return z;
}

NoiseCoefficientSet gsa_noise(const LevelScheme& s, const DriveConfig& d,
                              double w) {
  return gsa_noise_shifted(s, d, w, d.delta1, d.delta2);
}

std::pair<ParametricCoefficients, NoiseCoefficientSet> exact_parametric(
    const LevelScheme& s, const DriveConfig& d, const SteadyState& st,
    double w) {
  const double a = d.od;
  const double g31 = s.g31(), g32 = s.g32(), g41 = s.g41(), g43 = s.g43();
  (void)g41;
  const double g31b = s.gamma31, g43c = s.g43c();
  const double sl = s.s_lambda();
  const double d1 = d.delta1, d2 = d.delta2;
  const cplx oc = d.omega_c, od = d.omega_d;
  const double phi = d.free_phase_factor();

  const cplx e31 = g31 - 2.0 * im * w;              // gamma31 - 2i w
  const cplx e32 = g32 - 2.0 * im * d1 - 2.0 * im * w;
  const cplx e43 = g43 - 2.0 * im * d2 - 2.0 * im * w;
  const cplx m = e43 * (e32 * e31 + std::norm(oc)) + e31 * std::norm(od);
  if (std::abs(m) == 0.0)
    throw std::domain_error("exact_parametric: shared denominator vanished");

  auto sg = [&](int j, int k) { return st.s(j, k); };

  ParametricCoefficients c;
  c.gamma_i =
      a * g31b / (2.0 * m) *
          (sg(1, 2) * std::conj(oc) * (im * g43 + 2.0 * (d2 + w)) -
           sg(1, 4) * std::conj(oc) * std::conj(od) +
           (sg(1, 1) - sg(3, 3)) * (e32 * e43 + std::norm(od))) +
      im * d.dk_l - im * w * phi;
  c.kappa_s = -a * std::sqrt(sl * g43c * g31b) / (2.0 * m) *
              (sg(1, 4) * e32 * e31 + sg(1, 4) * std::norm(oc) +
               sg(1, 2) * od * (im * g31 + 2.0 * w) +
               (sg(3, 3) - sg(1, 1)) * oc * od);
  // The idler coupling mirrors kappa_s with conjugated drive phases; the
  // (i gamma43 + 2 Delta2 + 2 w) factor multiplies both sigma41 and sigma42
  // terms.
  c.kappa_i = a * std::sqrt(sl * g43c * g31b) / (2.0 * m) *
              ((sg(4, 1) * (-im * g32 - 2.0 * d1 - 2.0 * w) +
                sg(4, 2) * std::conj(oc)) *
                   (im * g43 + 2.0 * d2 + 2.0 * w) +
               (sg(3, 3) - sg(4, 4)) * std::conj(oc) * std::conj(od) +
               sg(4, 1) * std::norm(od));
  c.g_s = a * sl * g43c / (2.0 * m) *
              ((sg(3, 3) - sg(4, 4)) * (e32 * e31 + std::norm(oc)) +
               sg(4, 2) * (-2.0 * w - im * g31) * od + sg(4, 1) * oc * od) -
          im * w * phi;

  NoiseCoefficientSet z;
  const cplx rs = std::sqrt(cplx(a * sl * g43c)) / m;
  const cplx ri = std::sqrt(cplx(a * g31b)) / m;
  z.zeta_s[0] = -im * rs * oc * od;
  z.zeta_s[1] = -rs * e31 * od;
  z.zeta_s[2] = im * rs * (e32 * e31 + std::norm(oc));
  z.zeta_i[0] = -im * ri * (e32 * e43 + std::norm(od));
  z.zeta_i[1] = ri * e43 * std::conj(oc);
  z.zeta_i[2] = im * ri * std::conj(oc) * std::conj(od);
  return {c, z};
}

std::pair<ParametricCoefficients, NoiseCoefficientSet> backward_parametric(
    const LevelScheme& s, const DriveConfig& d, double w) {
  // Signal coefficients are formally identical to the forward scheme; the
  // idler set differs by an overall minus sign (counter-propagating idler).
  DriveConfig df = d;
  df.dk_l = -d.dk_l;  // the Delta_k term enters Gamma_i,B with opposite sign
  ParametricCoefficients c = gsa_parametric(s, df, w);
  NoiseCoefficientSet z = gsa_noise(s, d, w);
  c.gamma_i = -c.gamma_i;
  c.kappa_i = -c.kappa_i;
  for (auto& v : z.zeta_i) v = -v;
  return {c, z};
}

std::array<double, 3> doppler_detunings(const LevelScheme& s,
                                        const DriveConfig& d, double v,
                                        int idler_shift_sign) {
  const double kc = wavenumber_c(s), kd = wavenumber_d(s), ki = wavenumber_i(s);
  const double kpm = (d.geometry == Geometry::forward) ? kc + kd : kc - kd;
  return {d.delta1 + kc * v, d.delta2 + kpm * v, idler_shift_sign * ki * v};
}

std::pair<ParametricCoefficients, NoiseCoefficientSet> doppler_parametric(
    const LevelScheme& s, const DriveConfig& d, double v, double w,
    int idler_shift_sign) {
  auto dd = doppler_detunings(s, d, v, idler_shift_sign);
  const double wp = w + dd[2];  // idler shift acts as a frequency offset
  if (d.population_model == PopulationModel::exact) {
    DriveConfig ds = d;
    ds.delta1 = dd[0];
    ds.delta2 = dd[1];
    SteadyState st = solve_steady(s, ds);
    return exact_parametric(s, ds, st, wp);
  }
  return {gsa_parametric_shifted(s, d, wp, dd[0], dd[1]),
          gsa_noise_shifted(s, d, wp, dd[0], dd[1])};
}

DiffusionPair diffusion(const LevelScheme& s, const SteadyState& st) {
  if (!st.hermitian(1e-9))
    throw std::invalid_argument("diffusion: steady state is not Hermitian");
  const double g21 = s.g21(), g31 = s.g31(), g32 = s.g32(), g41 = s.g41(),
               g42 = s.g42(), g43 = s.g43();
  const double G21 = s.gamma21, G31 = s.gamma31, G42 = s.gamma42,
               G43 = s.gamma43;
  DiffusionPair dp;
  dp.d_kj_jk.setZero();
  dp.d_jk_kj.setZero();
  auto& d1 = dp.d_kj_jk;
  d1(0, 0) = g31 * st.s(1, 1) + G21 * st.s(2, 2) + G31 * st.s(3, 3);
  d1(1, 1) = (g32 - G21) * st.s(2, 2) + G42 * st.s(4, 4);
  d1(2, 2) = (g43 - G42 - G43) * st.s(4, 4);
  d1(1, 0) = 0.5 * (g31 + g32 - g21) * st.s(2, 1);
  d1(0, 1) = std::conj(d1(1, 0));
  d1(2, 0) = 0.5 * (g31 + g43 - g41) * st.s(4, 1);
  d1(0, 2) = std::conj(d1(2, 0));
  d1(2, 1) = 0.5 * (g32 + g43 - g42) * st.s(4, 2);
  d1(1, 2) = std::conj(d1(2, 1));
  auto& d2 = dp.d_jk_kj;
  d2(0, 0) = G43 * st.s(4, 4) + (g31 - G31) * st.s(3, 3);
  d2(1, 1) = G43 * st.s(4, 4) + (g32 - G31) * st.s(3, 3);
  d2(2, 2) = G43 * st.s(4, 4) + (g43 - G31) * st.s(3, 3);
  return dp;
}

}  // namespace sfwm
