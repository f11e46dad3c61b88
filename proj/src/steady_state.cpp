#include "sfwm/steady_state.hpp"

namespace sfwm {

namespace {

// Unknown ordering for the 10-dimensional zeroth-order system.  The optical
// coherences (31, 32, 34 and adjoints) are first-order quantities and decouple
// from the zeroth-order block.
enum Idx { s11, s22, s33, s44, s21, s12, s41, s14, s42, s24, nvar };

}  // namespace

SteadyState solve_steady(const LevelScheme& s, const DriveConfig& d,
                         std::optional<DopplerShift> shift) {
  const double d1 = shift ? shift->d1p : d.delta1;
  const double d2 = shift ? shift->d2p : d.delta2;
  const cplx oc = d.omega_c, od = d.omega_d;
  const cplx i2(0.0, 0.5);  // i/2

  Eigen::Matrix<cplx, nvar, nvar> a = Eigen::Matrix<cplx, nvar, nvar>::Zero();
  Eigen::Matrix<cplx, nvar, 1> b = Eigen::Matrix<cplx, nvar, 1>::Zero();

  // Population equations.
  // d/dt s11 = G21 s22 + G31 s33 + i/2 (oc* s12 - oc s21) -> replaced by trace
  a(0, s11) = a(0, s22) = a(0, s33) = a(0, s44) = 1.0;
  b(0) = 1.0;
  // d/dt s22 = G42 s44 - G21 s22 + i/2 (oc s21 - oc* s12 - od s42 + od* s24)
  a(1, s44) = s.gamma42;
  a(1, s22) = -s.gamma21;
  a(1, s21) = i2 * oc;
  a(1, s12) = -i2 * std::conj(oc);
  a(1, s42) = -i2 * od;
  a(1, s24) = i2 * std::conj(od);
  // d/dt s33 = G43 s44 - G31 s33
  a(2, s44) = s.gamma43;
  a(2, s33) = -s.gamma31;
  // d/dt s44 = -(G42+G43) s44 + i/2 (od s42 - od* s24)
  a(3, s44) = -(s.gamma42 + s.gamma43);
  a(3, s42) = i2 * od;
  a(3, s24) = -i2 * std::conj(od);
  // Coherence equations.
  // d/dt s21 = -(g21/2 + i d1) s21 + i/2 [oc*(s22-s11) - od s41]
  a(4, s21) = -s.g21() / 2.0 - cplx(0.0, d1);
  a(4, s22) = i2 * std::conj(oc);
  a(4, s11) = -i2 * std::conj(oc);
  a(4, s41) = -i2 * od;
  // d/dt s41 = -(g41/2 + i d2) s41 + i/2 [oc* s42 - od* s21]
  a(5, s41) = -s.g41() / 2.0 - cplx(0.0, d2);
  a(5, s42) = i2 * std::conj(oc);
  a(5, s21) = -i2 * std::conj(od);
  // d/dt s42 = -(g42/2 - i(d1-d2)) s42 + i/2 [oc s41 + od*(s44 - s22)]
  a(6, s42) = -s.g42() / 2.0 + cplx(0.0, d1 - d2);
  a(6, s41) = i2 * oc;
  a(6, s44) = i2 * std::conj(od);
  a(6, s22) = -i2 * std::conj(od);
  // Adjoints of the three coherence equations (conjugate coefficients with
  // jk -> kj index swap).
  auto conj_map = [](int idx) {
    switch (idx) {
      case s21: return int(s12);
      case s12: return int(s21);
      case s41: return int(s14);
      case s14: return int(s41);
      case s42: return int(s24);
      case s24: return int(s42);
      default: return idx;
    }
  };
  for (int r = 4; r <= 6; ++r)
    for (int c = 0; c < nvar; ++c)
      if (a(r, c) != cplx(0.0)) a(r + 3, conj_map(c)) = std::conj(a(r, c));

  Eigen::FullPivLU<Eigen::Matrix<cplx, nvar, nvar>> lu(a);
  if (!lu.isInvertible())
    throw std::runtime_error(
        "solve_steady: degenerate steady state (singular system)");
  Eigen::Matrix<cplx, nvar, 1> x = lu.solve(b);

  SteadyState st;
  st.sigma(0, 0) = x(s11);
  st.sigma(1, 1) = x(s22);
  st.sigma(2, 2) = x(s33);
  st.sigma(3, 3) = x(s44);
  st.sigma(1, 0) = x(s21);
  st.sigma(0, 1) = x(s12);
  st.sigma(3, 0) = x(s41);
  st.sigma(0, 3) = x(s14);
  st.sigma(3, 1) = x(s42);
  st.sigma(1, 3) = x(s24);
  return st;
}

SteadyState gsa_steady(const LevelScheme& s, const DriveConfig& d) {
  if (d.delta1 == 0.0)
    throw std::domain_error("gsa_steady: Delta1 must be nonzero");
  SteadyState st;
  const cplx oc = d.omega_c, od = d.omega_d;
  st.sigma(0, 0) = 1.0;
  st.sigma(0, 1) = -oc / (2.0 * d.delta1);
  st.sigma(1, 0) = std::conj(st.sigma(0, 1));
  st.sigma(0, 3) = cplx(0.0, -1.0) * oc * od /
                   (2.0 * s.g41() * d.delta1 - cplx(0.0, 4.0) * d.delta1 * d.delta2);
  st.sigma(3, 0) = std::conj(st.sigma(0, 3));
  return st;
}

}  // namespace sfwm
