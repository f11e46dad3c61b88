#include "sfwm/spectra.hpp"

#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include "sfwm/kernels.hpp"
#include "sfwm/propagation.hpp"
#include "sfwm/specfun.hpp"
#include "sfwm/steady_state.hpp"

namespace sfwm {

namespace {

const cplx im(0.0, 1.0);

// The ii channel of the signal-side noise carries both orderings of the
// diffusion correlation, hence the fixed weight of 2.
constexpr double k_su_ii_weight = 2.0;

// (1 - e^{-2g})/(2g) with the removable singularity handled.
double iee_of(double g) {
  const double x = 2.0 * g;
  if (std::abs(x) < 1e-8) return 1.0 - 0.5 * x;
  return -std::expm1(-x) / x;
}

struct Moments {
  cplx e;          // e^{-Gamma_i}
  cplx ie, iec;    // int_0^1 e^{-Gamma_i z} dz and its conjugate
  double iee;      // int_0^1 |e^{-Gamma_i z}|^2 dz
  cplx rs, rki;    // kappa_s/Gamma_i, kappa_i/Gamma_i
};

Moments moments_of(const ParametricCoefficients& c) {
  Moments m;
  m.e = std::exp(-c.gamma_i);
  m.ie = expm1_over(-c.gamma_i);  // (e^{-Gi}-1)/(-Gi) = (1-E)/Gi
  m.iec = std::conj(m.ie);
  m.iee = iee_of(c.gamma_i.real());
  m.rs = c.kappa_s / c.gamma_i;
  m.rki = c.kappa_i / c.gamma_i;
  return m;
}

// Quadratic forms of the noise coefficient vectors with a diffusion matrix.
cplx bil(const std::array<cplx, 3>& a, const Eigen::Matrix3cd& d,
         const std::array<cplx, 3>& b) {
  cplx acc(0.0, 0.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) acc += std::conj(a[i]) * d(i, j) * b[j];
  return acc;
}

// Row-ordered form z_a^T D conj(z_b) used by the idler-side densities.
cplx bil_row(const std::array<cplx, 3>& a, const Eigen::Matrix3cd& d,
             const std::array<cplx, 3>& b) {
  cplx acc(0.0, 0.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) acc += a[i] * d(i, j) * std::conj(b[j]);
  return acc;
}

// Partial-length matrix exponential exp(-M * len), used by the z-quadrature
// path of the exact population model.
TransferMatrix transfer_exact_partial(const ParametricCoefficients& c,
                                      double len) {
  ParametricCoefficients cs = c;
  cs.gamma_i *= len;
  cs.kappa_s *= len;
  cs.kappa_i *= len;
  cs.g_s *= len;
  return transfer_exact(cs);
}

}  // namespace

namespace detail {

EvalContext::EvalContext(const LevelScheme& s, const DriveConfig& d)
    : scheme(s), drive(d) {
  // Diffusion matrices always use the exact steady-state populations; the
  // GSA is reliable for the parametric coefficients but not for the noise
  // source strengths.
  SteadyState st = solve_steady(s, d);
  DiffusionPair dp = diffusion(s, st);
  d1 = dp.d_kj_jk;
  d2 = dp.d_jk_kj;
}

OmegaEval EvalContext::eval(double omega) const {
  OmegaEval out;
  if (drive.od == 0.0) {
    out.b1 = out.c1 = 0.0;
    out.d1 = 1.0;
    out.pair_kernel = 0.0;
    return out;
  }

  if (drive.population_model == PopulationModel::exact) {
    if (drive.geometry == Geometry::backward)
      throw std::invalid_argument(
          "exact population model supports forward geometry only");
    auto [c, z] = exact_parametric(scheme, drive,
                                   solve_steady(scheme, drive), omega);
    TransferMatrix t = transfer_exact(c);
    out.b1 = t.b1;
    out.c1 = t.c1;
    out.d1 = t.d1;
    // 64-node Gauss-Legendre z-quadrature of the noise quadratic forms.
    static const auto gl = gauss_legendre(64, 0.0, 1.0);
    const cplx ss = bil(z.zeta_s, d1, z.zeta_s);
    const cplx si = bil(z.zeta_s, d1, z.zeta_i);
    const cplx is = bil(z.zeta_i, d1, z.zeta_s);
    const cplx ii = bil(z.zeta_i, d1, z.zeta_i);
    const cplx ssI = bil_row(z.zeta_s, d2, z.zeta_s);
    const cplx siI = bil_row(z.zeta_s, d2, z.zeta_i);
    const cplx iiI = bil_row(z.zeta_i, d2, z.zeta_i);
    double su = 0, iu = 0;
    cplx kn(0.0, 0.0);
    for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
      TransferMatrix p = transfer_exact_partial(c, 1.0 - gl.nodes[q]);
      const double w = gl.weights[q];
      su += w * (std::norm(p.a1) * ss.real() +
                 2.0 * std::real(std::conj(p.a1) * p.b1 * si) +
                 k_su_ii_weight * std::norm(p.b1) * ii.real());
      iu += w * (std::norm(p.c1) * ssI.real() +
                 2.0 * std::real(siI * p.c1 * std::conj(p.d1)) +
                 std::norm(p.d1) * iiI.real());
      kn += w * (std::conj(p.c1) * p.a1 * ss + std::conj(p.c1) * p.b1 * si +
                 std::conj(p.d1) * p.a1 * is + std::conj(p.d1) * p.b1 * ii);
    }
    out.su = su;
    out.iu = iu;
    out.pair_kernel = out.b1 * std::conj(out.d1) + kn;
    return out;
  }

  // GSA: closed-form z-moments (exponential antiderivatives).
  ParametricCoefficients c = gsa_parametric(scheme, drive, omega);
  NoiseCoefficientSet z = gsa_noise(scheme, drive, omega);
  const Moments m = moments_of(c);
  const cplx b1v = m.rs * (m.e - 1.0);
  const cplx c1v = m.rki * (m.e - 1.0);

  const cplx ss = bil(z.zeta_s, d1, z.zeta_s);
  const cplx si = bil(z.zeta_s, d1, z.zeta_i);
  const cplx is = bil(z.zeta_i, d1, z.zeta_s);
  const cplx ii = bil(z.zeta_i, d1, z.zeta_i);
  const cplx ssI = bil_row(z.zeta_s, d2, z.zeta_s);
  const cplx siI = bil_row(z.zeta_s, d2, z.zeta_i);
  const cplx iiI = bil_row(z.zeta_i, d2, z.zeta_i);

  const cplx ib = m.rs * (m.ie - 1.0);
  const double ibb =
      std::norm(m.rs) * (m.iee - (m.ie + m.iec).real() + 1.0);
  out.su = ss.real() + 2.0 * std::real(si * ib) +
           k_su_ii_weight * ii.real() * ibb;

  out.b1 = b1v;
  out.c1 = c1v;
  out.d1 = m.e;

  if (drive.geometry == Geometry::forward) {
    const double icc =
        std::norm(m.rki) * (m.iee - (m.ie + m.iec).real() + 1.0);
    const cplx icd = m.rki * (m.iee - m.iec);
    out.iu = ssI.real() * icc + 2.0 * std::real(siI * icd) +
             iiI.real() * m.iee;
    const cplx kc1 = std::conj(m.rki) * (m.iec - 1.0);
    const cplx kcb =
        std::conj(m.rki) * m.rs * (m.iee - m.iec - m.ie + 1.0);
    out.pair_kernel = b1v * std::conj(m.e) + ss * kc1 + si * kcb +
                      is * m.iec + ii * m.rs * (m.iee - m.iec);
  } else {
    const cplx eb = std::conj(m.e);
    const double icc = std::norm(m.rki) *
                       (std::norm(m.e) - 2.0 * std::real(m.e * m.iec) + m.iee);
    const cplx icd = m.rki * (m.e * m.iec - m.iee);
    out.iu = ssI.real() * icc + 2.0 * std::real(siI * icd) +
             iiI.real() * m.iee;
    const cplx kc1 = std::conj(m.rki) * (eb - m.iec);
    const cplx kcb =
        std::conj(m.rki) * m.rs * (eb * m.ie - eb - m.iee + m.iec);
    out.pair_kernel = b1v * eb + ss * kc1 + si * kcb + is * m.iec +
                      ii * m.rs * (m.iee - m.iec);
  }
  return out;
}

}  // namespace detail

namespace {

// Fill per-omega evaluations over a grid.  For the GSA the bilinear forms
// over the whole grid are computed with the dispatched SIMD kernel.
std::vector<detail::OmegaEval> fill_grid(const detail::EvalContext& ctx,
                                         const FrequencyGrid& grid) {
  const std::size_t n = grid.n;
  std::vector<detail::OmegaEval> out(n);
  if (ctx.drive.population_model == PopulationModel::exact ||
      ctx.drive.od == 0.0) {
    for (std::size_t j = 0; j < n; ++j) out[j] = ctx.eval(grid.omega(j));
    return out;
  }

  // Gather zeta vectors and z-moments across the grid.
  std::vector<cplx> zs[3], zi[3];
  for (int k = 0; k < 3; ++k) {
    zs[k].resize(n);
    zi[k].resize(n);
  }
  std::vector<Moments> mo(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double w = grid.omega(j);
    ParametricCoefficients c = gsa_parametric(ctx.scheme, ctx.drive, w);
    NoiseCoefficientSet z = gsa_noise(ctx.scheme, ctx.drive, w);
    mo[j] = moments_of(c);
    for (int k = 0; k < 3; ++k) {
      zs[k][j] = z.zeta_s[k];
      zi[k][j] = z.zeta_i[k];
    }
  }

  cplx d1m[9], d2m[9];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      d1m[3 * i + j] = ctx.d1(i, j);
      d2m[3 * i + j] = ctx.d2(i, j);
    }

  const cplx* pzs[3] = {zs[0].data(), zs[1].data(), zs[2].data()};
  const cplx* pzi[3] = {zi[0].data(), zi[1].data(), zi[2].data()};
  std::vector<cplx> ss(n, 0.0), si(n, 0.0), is(n, 0.0), ii(n, 0.0);
  std::vector<cplx> ssI(n, 0.0), isI(n, 0.0), iiI(n, 0.0);
  using kernels::bilinear_accum;
  bilinear_accum(pzs, pzs, d1m, 1.0, n, ss.data());
  bilinear_accum(pzs, pzi, d1m, 1.0, n, si.data());
  bilinear_accum(pzi, pzs, d1m, 1.0, n, is.data());
  bilinear_accum(pzi, pzi, d1m, 1.0, n, ii.data());
  // Row-ordered idler forms: z_a^T D conj(z_b) = conj(conj(z_a)^T conj(D)
  // z_b); D2 is real so the conjugate of the (a,b) bilinear suffices.
  bilinear_accum(pzs, pzs, d2m, 1.0, n, ssI.data());
  bilinear_accum(pzi, pzs, d2m, 1.0, n, isI.data());
  bilinear_accum(pzi, pzi, d2m, 1.0, n, iiI.data());

  const bool fwd = ctx.drive.geometry == Geometry::forward;
  for (std::size_t j = 0; j < n; ++j) {
    const Moments& m = mo[j];
    detail::OmegaEval& e = out[j];
    e.b1 = m.rs * (m.e - 1.0);
    e.c1 = m.rki * (m.e - 1.0);
    e.d1 = m.e;
    const cplx ib = m.rs * (m.ie - 1.0);
    const double ibb =
        std::norm(m.rs) * (m.iee - (m.ie + m.iec).real() + 1.0);
    e.su = ss[j].real() + 2.0 * std::real(si[j] * ib) +
           k_su_ii_weight * ii[j].real() * ibb;
    // siI row form is the conjugate of the (zi, zs) bilinear.
    const cplx siIv = std::conj(isI[j]);
    if (fwd) {
      const double icc =
          std::norm(m.rki) * (m.iee - (m.ie + m.iec).real() + 1.0);
      const cplx icd = m.rki * (m.iee - m.iec);
      e.iu = ssI[j].real() * icc + 2.0 * std::real(siIv * icd) +
             iiI[j].real() * m.iee;
      const cplx kc1 = std::conj(m.rki) * (m.iec - 1.0);
      const cplx kcb =
          std::conj(m.rki) * m.rs * (m.iee - m.iec - m.ie + 1.0);
      e.pair_kernel = e.b1 * std::conj(m.e) + ss[j] * kc1 + si[j] * kcb +
                      is[j] * m.iec + ii[j] * m.rs * (m.iee - m.iec);
    } else {
      const cplx eb = std::conj(m.e);
      const double icc =
          std::norm(m.rki) *
          (std::norm(m.e) - 2.0 * std::real(m.e * m.iec) + m.iee);
      const cplx icd = m.rki * (m.e * m.iec - m.iee);
      e.iu = ssI[j].real() * icc + 2.0 * std::real(siIv * icd) +
             iiI[j].real() * m.iee;
      const cplx kc1 = std::conj(m.rki) * (eb - m.iec);
      const cplx kcb =
          std::conj(m.rki) * m.rs * (eb * m.ie - eb - m.iee + m.iec);
      e.pair_kernel = e.b1 * eb + ss[j] * kc1 + si[j] * kcb +
                      is[j] * m.iec + ii[j] * m.rs * (m.iee - m.iec);
    }
  }
  return out;
}

}  // namespace

namespace detail {

namespace {

struct QuadIntegrand {
  std::function<double(double)> f;
  double scale;
};

double quad_wrapper(double t, void* params) {
  const auto* q = static_cast<const QuadIntegrand*>(params);
  const double c = std::cos(t);
  const double w = q->scale * std::tan(t);
  return q->f(w) * q->scale / (c * c);
}

}  // namespace

// Adaptive quadrature over the whole real line via the tangent map
// omega = scale * tan(t).
double real_line_quad(const std::function<double(double)>& f, double scale) {
  gsl_error_handler_t* old = gsl_set_error_handler_off();
  QuadIntegrand q{f, scale};
  gsl_function gf{quad_wrapper, &q};
  gsl_integration_workspace* ws = gsl_integration_workspace_alloc(4000);
  double result = 0.0, abserr = 0.0;
  const double half_pi = pi / 2.0;
  int status = gsl_integration_qags(&gf, -half_pi, half_pi, 1e-13, 1e-9, 4000,
                                    ws, &result, &abserr);
  gsl_integration_workspace_free(ws);
  gsl_set_error_handler(old);
  if (status != GSL_SUCCESS && status != GSL_EROUND)
    throw std::runtime_error("real_line_quad: adaptive quadrature failed");
  return result;
}

}  // namespace detail

namespace {

using detail::real_line_quad;

double quad_scale(const DriveConfig& d) { return std::max(2.0, d.od / 8.0); }

}  // namespace

SpectralDecomposition decompose(const LevelScheme& scheme,
                                const DriveConfig& drive,
                                const FrequencyGrid& grid) {
  detail::EvalContext ctx(scheme, drive);
  auto evals = fill_grid(ctx, grid);
  SpectralDecomposition d;
  d.grid = grid;
  const std::size_t n = grid.n;
  d.s_paired.resize(n);
  d.i_paired.resize(n);
  d.s_unpaired.resize(n);
  d.i_unpaired.resize(n);
  const double inv2pi = 1.0 / (2.0 * pi);
  for (std::size_t j = 0; j < n; ++j) {
    d.s_paired[j] = std::norm(evals[j].b1) * inv2pi;
    d.i_paired[j] = std::norm(evals[j].c1) * inv2pi;
    d.s_unpaired[j] = std::max(evals[j].su * inv2pi, 0.0);
    d.i_unpaired[j] = std::max(evals[j].iu * inv2pi, 0.0);
  }
  // Rates by adaptive quadrature of the same per-omega densities so the
  // totals do not depend on the finite grid window.
  const double sc = quad_scale(drive);
  d.r_sp = rate_to_si(
      real_line_quad([&](double w) { return std::norm(ctx.eval(w).b1); }, sc) *
      inv2pi);
  d.r_ip = rate_to_si(
      real_line_quad([&](double w) { return std::norm(ctx.eval(w).c1); }, sc) *
      inv2pi);
  d.r_su = rate_to_si(
      real_line_quad([&](double w) { return ctx.eval(w).su; }, sc) * inv2pi);
  d.r_iu = rate_to_si(
      real_line_quad([&](double w) { return ctx.eval(w).iu; }, sc) * inv2pi);
  d.r_s = d.r_sp + d.r_su;
  d.r_i = d.r_ip + d.r_iu;
  return d;
}

KernelTrace kernel_trace(const LevelScheme& scheme, const DriveConfig& drive,
                         const FrequencyGrid& grid) {
  detail::EvalContext ctx(scheme, drive);
  auto evals = fill_grid(ctx, grid);
  KernelTrace t;
  t.grid = grid;
  const std::size_t n = grid.n;
  t.pair_kernel.resize(n);
  t.s_total.resize(n);
  t.i_total.resize(n);
  const double inv2pi = 1.0 / (2.0 * pi);
  for (std::size_t j = 0; j < n; ++j) {
    t.pair_kernel[j] = evals[j].pair_kernel;
    t.s_total[j] = (std::norm(evals[j].b1) + evals[j].su) * inv2pi;
    t.i_total[j] = (std::norm(evals[j].c1) + evals[j].iu) * inv2pi;
  }
  return t;
}

double pairing_rate(const LevelScheme& scheme, const DriveConfig& drive) {
  detail::EvalContext ctx(scheme, drive);
  const double v = real_line_quad(
      [&](double w) { return std::norm(ctx.eval(w).b1); }, quad_scale(drive));
  return rate_to_si(v / (2.0 * pi));
}

std::pair<double, double> pairing_rate_analytic(const LevelScheme& scheme,
                                                const DriveConfig& drive) {
  const double a = drive.od;
  const double g31b = scheme.gamma31, g31 = scheme.g31(), g41 = scheme.g41();
  const double sl = scheme.s_lambda(), g43c = scheme.g43c();
  const double bracket = std::norm(
      drive.omega_c * drive.omega_d /
      (2.0 * drive.delta1 * cplx(g41, 2.0 * drive.delta2)));
  const double pref =
      std::sqrt(a * g31b * g31 / (2.0 * pi)) * (sl * g43c / g31b) * bracket;
  const double kk = a * g31b / (8.0 * g31);
  const double full =
      pref * (std::exp(-kk) + std::sqrt(pi * kk) * std::erf(kk) -
              1.0 / std::sqrt(2.0));
  // Large-OD limit: Erf -> 1, exp(-K) -> 0.
  const double asym = pref * (std::sqrt(pi * kk) - 1.0 / std::sqrt(2.0));
  return {rate_to_si(full), rate_to_si(asym)};
}

std::pair<double, double> pairing_ratios(const SpectralDecomposition& d) {
  if (d.r_s <= 0.0 || d.r_i <= 0.0)
    throw std::domain_error("pairing_ratios: total rates must be positive");
  return {d.r_sp / d.r_s, d.r_ip / d.r_i};
}

}  // namespace sfwm
