#pragma once

#include <Eigen/Core>
#include <stdexcept>

#include "pmo/polymatrix.hpp"
#include "pmo/tms.hpp"

namespace pmo {

// half-degree parameter of a polynomial matrix: max over entries of
// ceil(deg/2); 0 for a constant matrix
inline int degree_param(const PolyMatrix& g) {
  int d = 0;
  for (int i = 0; i < g.size(); ++i)
    for (int j = i; j < g.size(); ++j)
      d = std::max(d, (g.at(i, j).degree() + 1) / 2);
  return d;
}

// localizing matrix of q on the explicit basis [x]_t:
// entry (a, b) = sum_gamma q_gamma y_{a+b+gamma}
inline Eigen::MatrixXd localizing_on_basis(const Tms& y, const Polynomial& q, int t) {
  if (q.nvars() != y.nvars())
    throw std::invalid_argument("localizing matrix: variable count mismatch");
  if (t < 0) throw std::invalid_argument("localizing matrix: negative basis degree");
  if (2 * t + q.degree() > y.order())
    throw std::invalid_argument("localizing matrix: sequence order too small");
  const MonomialBasis basis(y.nvars(), t);
  const int s = basis.size();
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(s, s);
  for (int a = 0; a < s; ++a)
    for (int b = a; b < s; ++b) {
      const Exponents ab = add_exps(basis[a], basis[b]);
      double v = 0.0;
      for (const auto& [m, c] : q.terms()) v += c * y.value(add_exps(ab, m.exps));
      r(a, b) = v;
      r(b, a) = v;
    }
  return r;
}

// M_k[y]: entry (a, b) = y_{a+b} over [x]_k
inline Eigen::MatrixXd moment_matrix(const Tms& y, int k) {
  return localizing_on_basis(y, Polynomial::constant(y.nvars(), 1.0), k);
}

// L_q^{(k)}[y] over [x]_t with t = k - ceil(deg q / 2)
inline Eigen::MatrixXd localizing_scalar(const Tms& y, const Polynomial& q, int k) {
  if (q.degree() > 2 * k)
    throw std::invalid_argument("localizing_scalar: deg q exceeds 2k");
  const int t = k - (q.degree() + 1) / 2;
  return localizing_on_basis(y, q, t);
}

// L_G^{(k)}[y]: m x m blocks, all on the common basis [x]_{k - d_G};
// block (i, j) is the localizing matrix of G_ij. Row layout is block-major:
// global row = i * s + a for matrix row i and basis position a.
inline Eigen::MatrixXd localizing_block(const Tms& y, const PolyMatrix& g, int k) {
  const int dg = degree_param(g);
  if (dg > k) throw std::invalid_argument("localizing_block: k below degree parameter");
  const int t = k - dg;
  const int s = static_cast<int>(MonomialBasis::count(y.nvars(), t));
  const int m = g.size();
  Eigen::MatrixXd r(m * s, m * s);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      const Eigen::MatrixXd blk = localizing_on_basis(y, g.at(i, j), t);
      r.block(i * s, j * s, s, s) = blk;
      if (i != j) r.block(j * s, i * s, s, s) = blk;
    }
  return r;
}

}  // namespace pmo
