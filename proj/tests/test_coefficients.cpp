#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sfwm/coefficients.hpp"
#include "sfwm/propagation.hpp"
#include "sfwm/steady_state.hpp"

using namespace sfwm;

TEST_CASE("idler absorption exponent pins the optical-depth normalization") {
  // At omega = 0, Delta_k = 0 and gamma31 = Gamma31 the loss entry is
  // |D1|^2 = exp(-alpha) in the transfer matrix.
  auto [s, d] = preset("rb87_1529_780");  // gamma31 = 1
  d.od = 10.0;
  d.dk_l = 0.0;
  ParametricCoefficients c = gsa_parametric(s, d, 0.0);
  CHECK(c.gamma_i.real() == doctest::Approx(5.0).epsilon(1e-12));
  TransferMatrix t = transfer_gsa(c);
  CHECK(std::norm(t.d1) == doctest::Approx(std::exp(-10.0)).epsilon(1e-10));
}

TEST_CASE("transfer entries follow the closed forms of the coefficients") {
  auto [s, d] = preset("rb87_1367_780");
  d.od = 30.0;
  for (double w : {-3.0, 0.4, 7.7}) {
    ParametricCoefficients c = gsa_parametric(s, d, w);
    TransferMatrix t = transfer_gsa(c);
    CHECK(std::abs(t.b1 - (-c.kappa_s * expm1_over(-c.gamma_i))) < 1e-14);
    CHECK(std::abs(t.c1 - (-c.kappa_i * expm1_over(-c.gamma_i))) < 1e-14);
    CHECK(std::abs(t.d1 - std::exp(-c.gamma_i)) < 1e-14);
  }
}

TEST_CASE("shifted coefficients reduce to unshifted at zero velocity") {
  auto [s, d] = preset("rb87_warm_tu");
  for (double w : {-11.0, 0.6}) {
    ParametricCoefficients a = gsa_parametric(s, d, w);
    auto [b, z] = doppler_parametric(s, d, 0.0, w);
    CHECK(std::abs(a.gamma_i - b.gamma_i) < 1e-12 * std::abs(a.gamma_i));
    CHECK(std::abs(a.kappa_s - b.kappa_s) < 1e-12 * std::abs(a.kappa_s));
    CHECK(std::abs(a.kappa_i - b.kappa_i) < 1e-12 * std::abs(a.kappa_i));
    NoiseCoefficientSet zn = gsa_noise(s, d, w);
    for (int k = 0; k < 3; ++k) {
      CHECK(std::abs(zn.zeta_s[k] - z.zeta_s[k]) < 1e-12);
      CHECK(std::abs(zn.zeta_i[k] - z.zeta_i[k]) < 1e-12);
    }
  }
}

TEST_CASE("backward mapping flips the idler row only") {
  auto [s, d] = preset("rb85_776_780_chaneliere");
  d.od = 25.0;
  d.geometry = Geometry::backward;
  DriveConfig df = d;
  df.geometry = Geometry::forward;
  for (double w : {-2.2, 0.9, 5.0}) {
    ParametricCoefficients f = gsa_parametric(s, df, w);
    auto [b, zb] = backward_parametric(s, d, w);
    CHECK(std::abs(b.gamma_i + f.gamma_i) < 1e-12 * std::abs(f.gamma_i));
    CHECK(std::abs(b.kappa_s - f.kappa_s) < 1e-12 * std::abs(f.kappa_s));
    CHECK(std::abs(b.kappa_i + f.kappa_i) < 1e-12 * std::abs(f.kappa_i));
    NoiseCoefficientSet zf = gsa_noise(s, df, w);
    for (int k = 0; k < 3; ++k) {
      CHECK(std::abs(zb.zeta_s[k] - zf.zeta_s[k]) < 1e-12);
      CHECK(std::abs(zb.zeta_i[k] + zf.zeta_i[k]) < 1e-12);
    }
  }
}

TEST_CASE("exact-population coefficients approach the closed form at large "
          "detuning") {
  auto [s, d] = preset("rb87_1529_780");
  d.omega_c = 0.5;
  d.omega_d = 0.5;
  d.delta1 = -300.0;
  SteadyState st = solve_steady(s, d);
  for (double w : {0.2, 1.5}) {
    ParametricCoefficients g = gsa_parametric(s, d, w);
    auto [e, z] = exact_parametric(s, d, st, w);
    CHECK(std::abs(e.gamma_i - g.gamma_i) < 2e-2 * std::abs(g.gamma_i));
    CHECK(std::abs(e.kappa_s - g.kappa_s) < 2e-2 * std::abs(g.kappa_s));
    CHECK(std::abs(e.kappa_i - g.kappa_i) < 2e-2 * std::abs(g.kappa_i));
  }
}

TEST_CASE("diffusion matrices from the fluctuation-dissipation relation") {
  auto [s, d] = preset("rb87_1529_780");
  SteadyState st = solve_steady(s, d);
  DiffusionPair dp = diffusion(s, st);
  // Diagonals are noise strengths: real and nonnegative.
  for (int k = 0; k < 3; ++k) {
    CHECK(dp.d_kj_jk(k, k).imag() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(dp.d_kj_jk(k, k).real() >= -1e-14);
    CHECK(dp.d_jk_kj(k, k).imag() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(dp.d_jk_kj(k, k).real() >= -1e-14);
  }
  // First diagonal entry: gamma31 s11 + Gamma21 s22 + Gamma31 s33.
  const double expected = s.g31() * st.population(1) +
                          s.gamma21 * st.population(2) +
                          s.gamma31 * st.population(3);
  CHECK(dp.d_kj_jk(0, 0).real() == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("wavenumbers in internal units") {
  auto [s, d] = preset("rb87_1529_780");
  CHECK(wavenumber_c(s) ==
        doctest::Approx(2.0 * pi / s.lambda_c / gamma_unit).epsilon(1e-14));
  CHECK(wavenumber_i(s) ==
        doctest::Approx(2.0 * pi / s.lambda_i / gamma_unit).epsilon(1e-14));
}
