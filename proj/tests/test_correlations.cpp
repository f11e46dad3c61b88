#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sfwm/correlations.hpp"

using namespace sfwm;

TEST_CASE("decay-time extractor is exact on a pure exponential") {
  const double tau0 = 3.7;
  std::vector<double> t, y;
  for (int j = -200; j < 4000; ++j) {
    t.push_back(j * 0.01);
    y.push_back(j < 0 ? 1e-12 : std::exp(-j * 0.01 / tau0));
  }
  DecayDiagnostics dg = decay_time(t, y);
  CHECK(dg.tau_d == doctest::Approx(tau0).epsilon(1e-10));
  CHECK(dg.residual_rms < 1e-10);
}

TEST_CASE("single-pole kernel transforms to a one-sided exponential") {
  // K(omega) = 1/(gamma/2 + i omega) has its pole in the upper half plane
  // of the e^{i omega tau} transform, so psi(tau) ~ e^{-gamma tau / 2} for
  // tau > 0.  Pins both the FFT sign convention and the decay extraction.
  const double gamma = 2.0;
  KernelTrace kt;
  kt.grid = FrequencyGrid::make(1 << 16, 800.0);
  kt.pair_kernel.resize(kt.grid.n);
  kt.s_total.assign(kt.grid.n, 1e-3);
  kt.i_total.assign(kt.grid.n, 1e-3);
  for (int j = 0; j < kt.grid.n; ++j)
    kt.pair_kernel[j] = 1.0 / cplx(gamma / 2.0, kt.grid.omega(j));
  CorrelationTrace tr = trace_from_kernel(kt);
  // Mass sits at positive delay.
  double left = 0, right = 0;
  for (std::size_t j = 0; j < tr.tau.size(); ++j)
    (tr.tau[j] < 0 ? left : right) += std::norm(tr.psi[j]);
  CHECK(right > 100.0 * left);
  DecayDiagnostics dg = decay_time(tr);
  CHECK(dg.tau_d == doctest::Approx(1.0 / gamma).epsilon(1e-2));
}

TEST_CASE("cross-correlation time reversal under kernel conjugation") {
  // Transform of conj(K(-omega)) is the time reverse of the transform of K.
  KernelTrace kt;
  kt.grid = FrequencyGrid::make(1 << 12, 100.0);
  kt.pair_kernel.resize(kt.grid.n);
  kt.s_total.assign(kt.grid.n, 1.0);
  kt.i_total.assign(kt.grid.n, 1.0);
  for (int j = 0; j < kt.grid.n; ++j)
    kt.pair_kernel[j] =
        std::exp(cplx(-0.01 * kt.grid.omega(j) * kt.grid.omega(j),
                      0.3 * kt.grid.omega(j)));
  KernelTrace rev = kt;
  for (int j = 0; j < kt.grid.n; ++j)
    rev.pair_kernel[j] = std::conj(kt.pair_kernel[kt.grid.n - 1 - j]);
  CorrelationTrace a = trace_from_kernel(kt);
  CorrelationTrace b = trace_from_kernel(rev);
  const std::size_t n = a.tau.size();
  // Sorted delays run from -(n/2 - 1) dtau to (n/2) dtau, so the mirror bin
  // of index j is n - 2 - j.
  double peak = 0;
  for (const cplx& p : a.psi) peak = std::max(peak, std::norm(p));
  for (std::size_t j = 21; j + 2 < n; j += 257) {
    CHECK(std::abs(a.tau[j] + b.tau[n - 2 - j]) < 1e-9);
    CHECK(std::abs(std::norm(a.psi[j]) - std::norm(b.psi[n - 2 - j])) <
          1e-8 * peak);
  }
}

TEST_CASE("cold decay-time anchors") {
  auto [s, d] = preset("rb87_1529_780");
  SUBCASE("natural linewidth at negligible depth") {
    d.od = 0.1;
    CorrelationTrace tr = wavefunction(s, d, correlation_grid(s, d));
    CHECK(time_to_ns(decay_time(tr).tau_d) == doctest::Approx(26.0).epsilon(0.08));
  }
  SUBCASE("collective shortening at OD = 10") {
    d.od = 10.0;
    CorrelationTrace tr = wavefunction(s, d, correlation_grid(s, d));
    CHECK(time_to_ns(decay_time(tr).tau_d) == doctest::Approx(7.0).epsilon(0.15));
  }
}

TEST_CASE("autocorrelations at zero delay are thermal") {
  auto [s, d] = preset("rb87_1367_780");
  d.od = 30.0;
  NonclassicalityMetrics m =
      metrics(s, d, correlation_grid(s, d, 1 << 16));
  CHECK(std::abs(m.g2ss0 - 2.0) < 1e-6);
  CHECK(std::abs(m.g2ii0 - 2.0) < 1e-6);
  CHECK(m.r_sb > 0.0);
  CHECK(m.f_csi > 1.0);
}

TEST_CASE("cauchy-schwarz factor falls with the square of the pair rate") {
  // Pair rate varied through the pump power at fixed depth: the paired
  // amplitude and the singles rates then scale together and F ~ 1/R_p^2.
  auto [s, d] = preset("rb87_1367_780");
  d.od = 170.0;
  auto point = [&](double pump) {
    DriveConfig di = d;
    di.omega_c = pump;
    di.omega_d = pump;
    FrequencyGrid g = correlation_grid(s, di, 1 << 16);
    NonclassicalityMetrics m = metrics(s, di, g);
    SpectralDecomposition dec = decompose(s, di, g);
    return std::pair{std::min(dec.r_sp, dec.r_ip), m.f_csi};
  };
  auto [rp1, f1] = point(1.0);
  auto [rp2, f2] = point(1.3);
  const double slope = std::log(f2 / f1) / std::log(rp2 / rp1);
  CHECK(slope == doctest::Approx(-2.0).epsilon(0.05));
}

TEST_CASE("superradiant time scale and thermal number statistics") {
  CHECK(superradiant_tau(0.0, 1.0) == doctest::Approx(1.0));
  CHECK(superradiant_tau(36.0, 1.0) == doctest::Approx(0.1));
  const double nbar = 0.37;
  double sum = 0, mean = 0, second = 0;
  for (int n = 0; n < 400; ++n) {
    const double p = thermal_pn(nbar, n);
    CHECK(p >= 0.0);
    sum += p;
    mean += n * p;
    second += n * (n - 1.0) * p;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mean == doctest::Approx(nbar).epsilon(1e-12));
  // g2(0) = <n(n-1)>/<n>^2 = 2 for a thermal state.
  CHECK(second / (mean * mean) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("analytic large-depth waveform matches the numeric decay") {
  auto [s, d] = preset("rb87_1529_780");
  d.od = 30.0;
  CorrelationTrace tr = wavefunction(s, d, correlation_grid(s, d));
  const double td = decay_time(tr).tau_d;
  const double ta = analytic_decay_time(s, d.od);
  CHECK(std::abs(ta - td) / td < 0.05);
}
