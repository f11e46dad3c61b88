#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sfwm/doppler.hpp"

using namespace sfwm;

TEST_CASE("velocity grids are normalized with the right width") {
  auto [s, d] = preset("rb87_warm_tu");
  const double vth = thermal_velocity(300.0, s.mass);
  SUBCASE("gauss-hermite grid") {
    VelocityGrid g = velocity_grid(300.0, s.mass, 64);
    double w0 = 0, w2 = 0;
    for (std::size_t k = 0; k < g.nodes.size(); ++k) {
      w0 += g.weights[k];
      w2 += g.weights[k] * g.nodes[k] * g.nodes[k];
    }
    CHECK(w0 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(w2 == doctest::Approx(vth * vth).epsilon(1e-8));
    CHECK_THROWS(velocity_grid(-1.0, s.mass, 64));
    CHECK_THROWS(velocity_grid(300.0, s.mass, 4));
  }
  SUBCASE("dense trapezoid grid") {
    VelocityGrid g = dense_velocity_grid(s, d, 300.0);
    double w0 = 0, w2 = 0;
    for (std::size_t k = 0; k < g.nodes.size(); ++k) {
      w0 += g.weights[k];
      w2 += g.weights[k] * g.nodes[k] * g.nodes[k];
    }
    CHECK(w0 == doctest::Approx(1.0).epsilon(1e-12));
    // Truncated at 6 sigma; second moment within a few permille.
    CHECK(w2 == doctest::Approx(vth * vth).epsilon(5e-3));
  }
}

TEST_CASE("gaussian pole moment matches brute-force quadrature") {
  const double vth = 170.0;
  for (cplx z : {cplx(50.0, 30.0), cplx(-300.0, -80.0), cplx(0.0, 5.0)}) {
    const int n = 2000001;
    const double lim = 10.0 * vth, h = 2.0 * lim / (n - 1);
    cplx sum = 0.0;
    for (int j = 0; j < n; ++j) {
      const double v = -lim + j * h;
      const double w = (j == 0 || j == n - 1) ? 0.5 : 1.0;
      sum += w * std::exp(-v * v / (2.0 * vth * vth)) / (v - z);
    }
    sum *= h / (std::sqrt(2.0 * pi) * vth);
    CHECK(std::abs(gauss_pole_moment(vth, z) - sum) < 1e-8 * std::abs(sum));
  }
}

TEST_CASE("averaged coefficients reduce to the cold ones at low temperature") {
  auto [s, d] = preset("rb87_warm_tu");
  // At micro-kelvin temperatures the Gaussian is far narrower than every
  // pole; the partial-fraction average collapses onto the static values up
  // to the cancellation error of nearly coincident pole differences.
  for (double w : {-20.0, 0.7, 60.0}) {
    WarmCoefficients wc = averaged_coefficients(s, d, 1e-6, w);
    ParametricCoefficients c = gsa_parametric(s, d, w);
    CHECK(std::abs(wc.gamma_i - c.gamma_i) < 1e-2 * std::abs(c.gamma_i));
    CHECK(std::abs(wc.kappa_s - c.kappa_s) < 1e-2 * std::abs(c.kappa_s));
    CHECK(std::abs(wc.kappa_i - c.kappa_i) < 1e-2 * std::abs(c.kappa_i));
  }
}

TEST_CASE("node-sum averaging converges to the exact gaussian average") {
  auto [s, d] = preset("rb87_warm_tu");
  const double t = 300.0, w = 40.0;
  TransferMatrix exact = averaged_transfer_exact(s, d, t, w);
  // Gauss-Hermite nodes undersample the narrow idler velocity pole; the
  // dense composite grid is the quadrature that converges to the exact
  // Faddeeva average.
  TransferMatrix a = averaged_transfer(s, d, dense_velocity_grid(s, d, t), w);
  CHECK(std::abs(a.b1 - exact.b1) < 2e-2 * std::abs(exact.b1));
  CHECK(std::abs(a.d1 - exact.d1) < 2e-2 * std::abs(exact.d1));
}

TEST_CASE("warm pairing rate anchors") {
  auto [s, d] = preset("rb87_warm_tu");
  auto [rsp_cold, rip_cold] = warm_paired_rates(s, d, 1e-4);
  const double rp_cold = std::min(rsp_cold, rip_cold);
  const double rp_ref = pairing_rate(s, d);
  // The frozen-atom limit recovers the cold rate to a few percent (the
  // residual gap is the velocity-independent part of the idler shift).
  CHECK(std::abs(rp_cold - rp_ref) / rp_ref < 0.10);
  auto [rsp, rip] = warm_paired_rates(s, d, 300.0);
  CHECK(std::min(rsp, rip) == doctest::Approx(22.3).epsilon(0.05));
  CHECK(rsp > rip);  // room-temperature pairing is idler-limited
}

TEST_CASE("room-temperature correlation time") {
  auto [s, d] = preset("rb87_warm_tu");
  d.od = 0.1;
  FrequencyGrid g = FrequencyGrid::make(1 << 14, 2000.0);
  CorrelationTrace tr = warm_correlation(s, d, 300.0, g);
  CHECK(time_to_ns(decay_time(tr).tau_d) ==
        doctest::Approx(0.341).epsilon(0.03));
}

TEST_CASE("decay-scaling fit recovers a synthetic law exactly") {
  const double x = 1.0 / 47.0, tau31 = 2.2;
  std::vector<double> od = {0.1, 1.0, 5.0, 20.0, 80.0, 300.0}, td;
  for (double o : od) td.push_back(tau31 / (1.0 + x * o));
  CHECK(fit_decay_scaling(od, td) == doctest::Approx(x).epsilon(1e-6));
  CHECK_THROWS(fit_decay_scaling({1.0}, {1.0}));
}

TEST_CASE("warm kernels are reusable across optical depths") {
  auto [s, d] = preset("rb87_warm_tu");
  const double t = 300.0;
  FrequencyGrid g = FrequencyGrid::make(1 << 12, 2000.0);
  WarmNoiseKernels wk = warm_noise_kernels(s, d, t, g);
  DriveConfig d2 = d;
  d2.od = 7.0;
  KernelTrace a = warm_kernel_trace(s, d2, t, g, &wk);
  KernelTrace b = warm_kernel_trace(s, d2, t, g);
  for (int j = 0; j < g.n; j += 331) {
    CHECK(std::abs(a.pair_kernel[j] - b.pair_kernel[j]) <=
          1e-12 * std::abs(b.pair_kernel[j]) + 1e-300);
    CHECK(a.s_total[j] == doctest::Approx(b.s_total[j]).epsilon(1e-12));
  }
  FrequencyGrid other = FrequencyGrid::make(1 << 11, 2000.0);
  CHECK_THROWS(warm_kernel_trace(s, d2, t, other, &wk));
}
