#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sfwm/correlations.hpp"
#include "sfwm/spectra.hpp"

using namespace sfwm;

TEST_CASE("densities are nonnegative and rates decompose additively") {
  auto [s, d] = preset("rb87_1367_780");
  d.od = 100.0;
  FrequencyGrid g = correlation_grid(s, d, 1 << 13);
  SpectralDecomposition dec = decompose(s, d, g);
  for (int j = 0; j < g.n; ++j) {
    CHECK(dec.s_paired[j] >= 0.0);
    CHECK(dec.i_paired[j] >= 0.0);
    CHECK(dec.s_unpaired[j] >= 0.0);
    CHECK(dec.i_unpaired[j] >= 0.0);
  }
  CHECK(dec.r_s == doctest::Approx(dec.r_sp + dec.r_su));
  CHECK(dec.r_i == doctest::Approx(dec.r_ip + dec.r_iu));
  CHECK(dec.r_sp > 0);
  CHECK(dec.r_iu > 0);
}

TEST_CASE("zero coupling or zero depth kills the output") {
  auto [s, d] = preset("rb87_1529_780");
  FrequencyGrid g = FrequencyGrid::make(1 << 10, 200.0);
  SUBCASE("no upper drive") {
    d.omega_d = 0.0;
    SpectralDecomposition dec = decompose(s, d, g);
    CHECK(std::abs(dec.r_sp) < 1e-6);
    CHECK(std::abs(dec.r_su) < 1e-6);  // quadrature roundoff of a zero map
  }
  SUBCASE("no medium") {
    d.od = 0.0;
    SpectralDecomposition dec = decompose(s, d, g);
    CHECK(dec.r_s == doctest::Approx(0.0));
    CHECK(dec.r_i == doctest::Approx(0.0));
  }
}

TEST_CASE("grid refinement converges below 0.1%") {
  auto [s, d] = preset("rb87_1529_780");
  d.od = 10.0;
  SpectralDecomposition a =
      decompose(s, d, correlation_grid(s, d, 1 << 13));
  SpectralDecomposition b =
      decompose(s, d, correlation_grid(s, d, 1 << 14));
  CHECK(std::abs(a.r_su - b.r_su) / b.r_su < 1e-3);
  CHECK(std::abs(a.r_iu - b.r_iu) / b.r_iu < 1e-3);
}

TEST_CASE("paired rate scales linearly, unpaired as the square root") {
  auto [s, d] = preset("rb87_1367_780");
  auto rates = [&](double od) {
    DriveConfig di = d;
    di.od = od;
    FrequencyGrid g = correlation_grid(s, di, 1 << 13);
    SpectralDecomposition dec = decompose(s, di, g);
    return std::pair{std::min(dec.r_sp, dec.r_ip), dec.r_iu};
  };
  auto [rp1, ru1] = rates(100.0);
  auto [rp2, ru2] = rates(1000.0);
  const double slope_p = std::log(rp2 / rp1) / std::log(10.0);
  const double slope_u = std::log(ru2 / ru1) / std::log(10.0);
  CHECK(slope_p == doctest::Approx(1.0).epsilon(0.05));
  CHECK(slope_u == doctest::Approx(0.5).epsilon(0.10));
}

TEST_CASE("adaptive quadrature pairing rate matches the analytic forms") {
  auto [s, d] = preset("rb87_1529_780");
  d.od = 1000.0;
  const double rq = pairing_rate(s, d);
  auto [full, asym] = pairing_rate_analytic(s, d);
  CHECK(rq == doctest::Approx(2.85e5).epsilon(0.02));
  CHECK(full == doctest::Approx(rq).epsilon(0.01));
  CHECK(asym == doctest::Approx(rq).epsilon(0.01));
}

TEST_CASE("pairing ratios at moderate depth") {
  auto [s, d] = preset("rb87_1367_780");
  d.od = 100.0;
  FrequencyGrid g = correlation_grid(s, d, 1 << 14);
  auto [rps, rpi] = pairing_ratios(decompose(s, d, g));
  CHECK(rps == doctest::Approx(0.4366).epsilon(5e-3));
  CHECK(rpi == doctest::Approx(0.9238).epsilon(5e-3));
}

TEST_CASE("exact-population model agrees with the closed form off resonance") {
  auto [s, d] = preset("rb87_1529_780");
  d.od = 10.0;
  FrequencyGrid g = FrequencyGrid::make(1 << 12, 400.0);
  SpectralDecomposition ga = decompose(s, d, g);
  d.population_model = PopulationModel::exact;
  SpectralDecomposition ex = decompose(s, d, g);
  CHECK(ex.r_sp == doctest::Approx(ga.r_sp).epsilon(0.03));
  CHECK(ex.r_su == doctest::Approx(ga.r_su).epsilon(0.05));
}

TEST_CASE("kernel trace is consistent with the decomposition") {
  auto [s, d] = preset("rb87_1529_780");
  d.od = 10.0;
  FrequencyGrid g = FrequencyGrid::make(1 << 12, 400.0);
  SpectralDecomposition dec = decompose(s, d, g);
  KernelTrace kt = kernel_trace(s, d, g);
  for (int j = 0; j < g.n; j += 97) {
    CHECK(kt.s_total[j] ==
          doctest::Approx(dec.s_paired[j] + dec.s_unpaired[j]).epsilon(1e-10));
    CHECK(kt.i_total[j] ==
          doctest::Approx(dec.i_paired[j] + dec.i_unpaired[j]).epsilon(1e-10));
  }
}
