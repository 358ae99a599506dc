#pragma once

// shared test fixtures: independent reference implementations (finite
// differences, brute-force matrix builders) and the worked instances used
// across the suites.  Everything here is deliberately written the slow,
// obvious way so library results are checked against a second opinion.

#include <cmath>
#include <random>
#include <vector>

#include "pmo/moment.hpp"
#include "pmo/polymatrix.hpp"
#include "pmo/tms.hpp"

namespace oracle {

using pmo::Exponents;
using pmo::MonomialBasis;
using pmo::Polynomial;
using pmo::PolyMatrix;
using pmo::Tms;

// central difference gradient of any scalar field
template <typename F>
Eigen::VectorXd fd_gradient(const F& f, const Eigen::VectorXd& u, double h = 1e-5) {
  Eigen::VectorXd g(u.size());
  for (int i = 0; i < u.size(); ++i) {
    Eigen::VectorXd up = u, dn = u;
    up[i] += h;
    dn[i] -= h;
    g[i] = (f(up) - f(dn)) / (2.0 * h);
  }
  return g;
}

// central difference Hessian via nested gradients
template <typename F>
Eigen::MatrixXd fd_hessian(const F& f, const Eigen::VectorXd& u, double h = 1e-4) {
  const int n = static_cast<int>(u.size());
  Eigen::MatrixXd w(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Eigen::VectorXd pp = u, pm = u, mp = u, mm = u;
      pp[i] += h, pp[j] += h;
      pm[i] += h, pm[j] -= h;
      mp[i] -= h, mp[j] += h;
      mm[i] -= h, mm[j] -= h;
      w(i, j) = w(j, i) = (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * h * h);
    }
  return w;
}

// matrix-valued central difference, one coordinate at a time
inline Eigen::MatrixXd fd_matrix_partial(const PolyMatrix& g, const Eigen::VectorXd& u,
                                         int i, double h = 1e-6) {
  Eigen::VectorXd up = u, dn = u;
  up[i] += h;
  dn[i] -= h;
  return (g.eval(up) - g.eval(dn)) / (2.0 * h);
}

// y_{a+b+shift} laid over the degree-t basis, assembled entry by entry
inline Eigen::MatrixXd shifted_moment_matrix(const Tms& y, const Exponents& shift, int t) {
  MonomialBasis basis(y.nvars(), t);
  Eigen::MatrixXd out(basis.size(), basis.size());
  for (int a = 0; a < basis.size(); ++a)
    for (int b = 0; b < basis.size(); ++b)
      out(a, b) = y.value(pmo::add_exps(pmo::add_exps(basis[a], basis[b]), shift));
  return out;
}

inline Polynomial random_poly(std::mt19937& rng, int nvars, int deg) {
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::uniform_real_distribution<double> keep(0.0, 1.0);
  MonomialBasis basis(nvars, deg);
  Polynomial p(nvars);
  for (int i = 0; i < basis.size(); ++i)
    if (keep(rng) < 0.5) p.add_term(basis[i], coeff(rng));
  if (p.terms().empty()) p.add_term(Exponents(nvars, 0), coeff(rng));
  return p;
}

inline Eigen::VectorXd random_point(std::mt19937& rng, int n, double radius = 1.0) {
  std::uniform_real_distribution<double> coord(-radius, radius);
  Eigen::VectorXd u(n);
  for (int i = 0; i < n; ++i) u[i] = coord(rng);
  return u;
}

// random symmetric polynomial matrix with entry degrees <= deg
inline PolyMatrix random_matrix(std::mt19937& rng, int nvars, int m, int deg) {
  PolyMatrix g(nvars, m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) g.set(i, j, random_poly(rng, nvars, deg));
  return g;
}

// random instance with a unit-ball block appended, so the constraint set is
// compact and the quadratic module is Archimedean
inline std::pair<Polynomial, PolyMatrix> random_archimedean_instance(std::mt19937& rng,
                                                                     int nvars, int m_extra,
                                                                     int deg_f, int deg_g) {
  Polynomial ball(nvars);
  ball.add_term(Exponents(nvars, 0), 1.0);
  for (int i = 0; i < nvars; ++i) {
    Exponents e(nvars, 0);
    e[i] = 2;
    ball.add_term(e, -1.0);
  }
  PolyMatrix g = PolyMatrix::scalar(ball);
  if (m_extra > 0) g = PolyMatrix::block_diag(g, random_matrix(rng, nvars, m_extra, deg_g));
  return {random_poly(rng, nvars, deg_f), g};
}

// ---- worked instances ------------------------------------------------------

// min x1x3 - x2^2 + x1 + x3 over the ball with a Hankel PSD block; optimum 0
// at the origin with a rank-one flat moment matrix
inline Polynomial sucex2_f() {
  Polynomial f(3);
  f.add_term({1, 0, 1}, 1.0);
  f.add_term({0, 2, 0}, -1.0);
  f.add_term({1, 0, 0}, 1.0);
  f.add_term({0, 0, 1}, 1.0);
  return f;
}

inline PolyMatrix ball_hankel_g() {
  Polynomial ball(3);
  ball.add_term({0, 0, 0}, 1.0);
  ball.add_term({2, 0, 0}, -1.0);
  ball.add_term({0, 2, 0}, -1.0);
  ball.add_term({0, 0, 2}, -1.0);
  PolyMatrix inner(3, 2);
  inner.set(0, 0, Polynomial::variable(3, 0));
  inner.set(0, 1, Polynomial::variable(3, 1));
  inner.set(1, 1, Polynomial::variable(3, 2));
  return PolyMatrix::block_diag(PolyMatrix::scalar(ball), inner);
}

// min 3x1 + 2x2 with a determinant-degenerate constraint; optimum 0 at the
// origin where the nondegeneracy condition fails
inline Polynomial detdeg1_f() {
  Polynomial f(3);
  f.add_term({1, 0, 0}, 3.0);
  f.add_term({0, 1, 0}, 2.0);
  return f;
}

inline PolyMatrix detdeg1_g() {
  PolyMatrix g(3, 2);
  g.set(0, 0, Polynomial::variable(3, 0));
  g.set(0, 1, Polynomial::variable(3, 2));
  Polynomial q(3);
  q.add_term({2, 0, 0}, 1.0);
  q.add_term({0, 2, 0}, -1.0);
  q.add_term({4, 0, 0}, -1.0);
  q.add_term({0, 4, 0}, -1.0);
  q.add_term({0, 0, 4}, -1.0);
  q.add_term({2, 2, 0}, -2.0);
  q.add_term({2, 0, 2}, -2.0);
  q.add_term({0, 2, 2}, -2.0);
  g.set(1, 1, q);
  return g;
}

// min x1x3 - x2^2 over the same set as sucex2; the bound improves forever
// without finite convergence
inline Polynomial detdeg2_f() {
  Polynomial f(3);
  f.add_term({1, 0, 1}, 1.0);
  f.add_term({0, 2, 0}, -1.0);
  return f;
}

inline PolyMatrix detdeg2_g() { return ball_hankel_g(); }

// sextic with nondegeneracy and strict complementarity at the origin but a
// vanishing reduced Hessian
inline Polynomial detdeg3_f() {
  Polynomial f(4);
  f.add_term({4, 2, 0, 0}, 1.0);
  f.add_term({2, 4, 0, 0}, 1.0);
  f.add_term({0, 0, 6, 0}, 1.0);
  f.add_term({0, 0, 0, 6}, 1.0);
  f.add_term({2, 2, 2, 0}, -3.0);
  f.add_term({6, 0, 0, 0}, 0.01);
  f.add_term({0, 6, 0, 0}, 0.01);
  f.add_term({0, 0, 6, 0}, 0.01);
  return f;
}

inline PolyMatrix detdeg3_g() {
  PolyMatrix g(4, 2);
  Polynomial g00(4);
  g00.add_term({0, 0, 0, 0}, 1.0);
  g00.add_term({0, 0, 0, 2}, -1.0);
  g.set(0, 0, g00);
  Polynomial g01(4);
  g01.add_term({0, 0, 1, 1}, 1.0);
  g.set(0, 1, g01);
  Polynomial g11(4);
  g11.add_term({0, 0, 0, 0}, 1.0);
  g11.add_term({2, 0, 0, 0}, -1.0);
  g11.add_term({0, 2, 0, 0}, -1.0);
  g11.add_term({0, 0, 2, 0}, -1.0);
  g11.add_term({0, 0, 0, 2}, -1.0);
  g.set(1, 1, g11);
  return g;
}

// max x1 + x2 + x3 over the set of 3x3 correlation matrices
inline Polynomial elliptope_f() {
  Polynomial f(3);
  f.add_term({1, 0, 0}, -1.0);
  f.add_term({0, 1, 0}, -1.0);
  f.add_term({0, 0, 1}, -1.0);
  return f;
}

inline PolyMatrix elliptope_g() {
  PolyMatrix g(3, 3);
  g.set(0, 0, Polynomial::constant(3, 1.0));
  g.set(1, 1, Polynomial::constant(3, 1.0));
  g.set(2, 2, Polynomial::constant(3, 1.0));
  g.set(0, 1, Polynomial::variable(3, 0));
  g.set(0, 2, Polynomial::variable(3, 1));
  g.set(1, 2, Polynomial::variable(3, 2));
  return g;
}

// the SOS-convex quartic instance solved exactly at order 2
inline Polynomial convex33_f() {
  Polynomial f(3);
  f.add_term({4, 0, 0}, 1.0 / 3.0);
  f.add_term({0, 4, 0}, 1.0 / 3.0);
  f.add_term({0, 0, 4}, 1.0 / 3.0);
  f.add_term({2, 2, 0}, 1.0);
  f.add_term({2, 0, 0}, 1.0);
  f.add_term({1, 0, 0}, -2.0);
  f.add_term({0, 2, 0}, 1.0);
  f.add_term({0, 1, 0}, -2.0);
  f.add_term({0, 2, 0}, 0.0);
  f.add_term({0, 0, 2}, 1.0);
  f.add_term({0, 0, 1}, -2.0);
  f.add_term({0, 0, 0}, 3.0);
  return f;
}

inline PolyMatrix convex33_g() {
  PolyMatrix g(3, 3);
  Polynomial g00(3);
  g00.add_term({0, 0, 0}, 2.0);
  g00.add_term({2, 0, 0}, -1.0);
  g00.add_term({0, 0, 2}, -2.0);
  g.set(0, 0, g00);
  Polynomial g01(3);
  g01.add_term({0, 0, 0}, 1.0);
  g01.add_term({1, 1, 0}, 1.0);
  g.set(0, 1, g01);
  Polynomial g02(3);
  g02.add_term({1, 0, 1}, 1.0);
  g.set(0, 2, g02);
  Polynomial g11(3);
  g11.add_term({0, 0, 0}, 2.0);
  g11.add_term({0, 2, 0}, -1.0);
  g11.add_term({2, 0, 0}, -2.0);
  g.set(1, 1, g11);
  Polynomial g12(3);
  g12.add_term({0, 0, 0}, 1.0);
  g12.add_term({0, 1, 1}, 1.0);
  g.set(1, 2, g12);
  Polynomial g22(3);
  g22.add_term({0, 0, 0}, 2.0);
  g22.add_term({0, 0, 2}, -1.0);
  g22.add_term({0, 2, 0}, -2.0);
  g.set(2, 2, g22);
  return g;
}

}  // namespace oracle
