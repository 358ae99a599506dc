#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pmo/polynomial.hpp"

namespace pmo {

// Symmetric m x m polynomial matrix, upper triangle stored row-major.
// Variable indices are 0-based throughout the C++ API.
class PolyMatrix {
 public:
  PolyMatrix() : nvars_(0), m_(0) {}

  PolyMatrix(int nvars, int m)
      : nvars_(nvars), m_(m), entries_(static_cast<size_t>(m) * (m + 1) / 2, Polynomial(nvars)) {
    if (nvars < 0 || m < 0) throw std::invalid_argument("PolyMatrix: negative dimension");
  }

  static PolyMatrix identity(int nvars, int m) {
    PolyMatrix g(nvars, m);
    for (int i = 0; i < m; ++i) g.set(i, i, Polynomial::constant(nvars, 1.0));
    return g;
  }

  static PolyMatrix scalar(const Polynomial& p) {
    PolyMatrix g(p.nvars(), 1);
    g.set(0, 0, p);
    return g;
  }

  static PolyMatrix block_diag(const PolyMatrix& a, const PolyMatrix& b) {
    if (a.nvars() != b.nvars())
      throw std::invalid_argument("PolyMatrix::block_diag: mixed variable counts");
    PolyMatrix g(a.nvars(), a.size() + b.size());
    for (int i = 0; i < a.size(); ++i)
      for (int j = i; j < a.size(); ++j) g.set(i, j, a.at(i, j));
    for (int i = 0; i < b.size(); ++i)
      for (int j = i; j < b.size(); ++j)
        g.set(a.size() + i, a.size() + j, b.at(i, j));
    return g;
  }

  int nvars() const { return nvars_; }
  int size() const { return m_; }

  const Polynomial& at(int i, int j) const {
    check(i, j);
    if (i > j) std::swap(i, j);
    return entries_[offset(i, j)];
  }

  void set(int i, int j, const Polynomial& p) {
    check(i, j);
    if (p.nvars() != nvars_)
      throw std::invalid_argument("PolyMatrix::set: entry has wrong variable count");
    if (i > j) std::swap(i, j);
    entries_[offset(i, j)] = p;
  }

  int degree() const {
    int d = 0;
    for (const auto& p : entries_) d = std::max(d, p.degree());
    return d;
  }

  bool is_zero() const {
    for (const auto& p : entries_)
      if (!p.is_zero()) return false;
    return true;
  }

  Eigen::MatrixXd eval(const Eigen::VectorXd& u) const {
    Eigen::MatrixXd r(m_, m_);
    for (int i = 0; i < m_; ++i)
      for (int j = i; j < m_; ++j) {
        const double v = at(i, j).eval(u);
        r(i, j) = v;
        r(j, i) = v;
      }
    return r;
  }

  PolyMatrix partial(int i) const {
    if (i < 0 || i >= nvars_) throw std::out_of_range("PolyMatrix::partial: index");
    PolyMatrix r(nvars_, m_);
    for (int s = 0; s < m_; ++s)
      for (int t = s; t < m_; ++t) r.set(s, t, at(s, t).partial(i));
    return r;
  }

  friend PolyMatrix operator+(const PolyMatrix& a, const PolyMatrix& b) {
    if (a.nvars_ != b.nvars_ || a.m_ != b.m_)
      throw std::invalid_argument("PolyMatrix: shape mismatch in +");
    PolyMatrix r(a.nvars_, a.m_);
    for (size_t k = 0; k < a.entries_.size(); ++k)
      r.entries_[k] = a.entries_[k] + b.entries_[k];
    return r;
  }

  friend PolyMatrix operator-(const PolyMatrix& a, const PolyMatrix& b) {
    if (a.nvars_ != b.nvars_ || a.m_ != b.m_)
      throw std::invalid_argument("PolyMatrix: shape mismatch in -");
    PolyMatrix r(a.nvars_, a.m_);
    for (size_t k = 0; k < a.entries_.size(); ++k)
      r.entries_[k] = a.entries_[k] - b.entries_[k];
    return r;
  }

  friend PolyMatrix operator*(const Polynomial& p, const PolyMatrix& g) {
    if (p.nvars() != g.nvars_)
      throw std::invalid_argument("PolyMatrix: mixed variable counts in scale");
    PolyMatrix r(g.nvars_, g.m_);
    for (size_t k = 0; k < g.entries_.size(); ++k) r.entries_[k] = p * g.entries_[k];
    return r;
  }

  friend PolyMatrix operator*(double s, const PolyMatrix& g) {
    PolyMatrix r(g.nvars_, g.m_);
    for (size_t k = 0; k < g.entries_.size(); ++k) r.entries_[k] = g.entries_[k] * s;
    return r;
  }

 private:
  void check(int i, int j) const {
    if (i < 0 || j < 0 || i >= m_ || j >= m_)
      throw std::out_of_range("PolyMatrix: entry index out of range");
  }

  // row-major upper triangle: row i starts at i*m - i*(i-1)/2
  size_t offset(int i, int j) const {
    return static_cast<size_t>(i) * m_ - static_cast<size_t>(i) * (i - 1) / 2 + (j - i);
  }

  int nvars_;
  int m_;
  std::vector<Polynomial> entries_;
};

// General rectangular polynomial matrix, used for non-symmetric intermediates
// (minors, off-diagonal blocks, products).
class PolyGrid {
 public:
  PolyGrid() : nvars_(0), rows_(0), cols_(0) {}

  PolyGrid(int nvars, int rows, int cols)
      : nvars_(nvars),
        rows_(rows),
        cols_(cols),
        entries_(static_cast<size_t>(rows) * cols, Polynomial(nvars)) {
    if (nvars < 0 || rows < 0 || cols < 0)
      throw std::invalid_argument("PolyGrid: negative dimension");
  }

  static PolyGrid from_symmetric(const PolyMatrix& g) {
    PolyGrid r(g.nvars(), g.size(), g.size());
    for (int i = 0; i < g.size(); ++i)
      for (int j = 0; j < g.size(); ++j) r.at(i, j) = g.at(i, j);
    return r;
  }

  int nvars() const { return nvars_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Polynomial& at(int i, int j) { return entries_[index(i, j)]; }
  const Polynomial& at(int i, int j) const { return entries_[index(i, j)]; }

  PolyGrid transpose() const {
    PolyGrid r(nvars_, cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
  }

  PolyGrid minor_drop(int drop_row, int drop_col) const {
    PolyGrid r(nvars_, rows_ - 1, cols_ - 1);
    for (int i = 0, ri = 0; i < rows_; ++i) {
      if (i == drop_row) continue;
      for (int j = 0, rj = 0; j < cols_; ++j) {
        if (j == drop_col) continue;
        r.at(ri, rj) = at(i, j);
        ++rj;
      }
      ++ri;
    }
    return r;
  }

  friend PolyGrid operator*(const PolyGrid& a, const PolyGrid& b) {
    if (a.cols_ != b.rows_ || a.nvars_ != b.nvars_)
      throw std::invalid_argument("PolyGrid: shape mismatch in product");
    PolyGrid r(a.nvars_, a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int j = 0; j < b.cols_; ++j) {
        Polynomial s(a.nvars_);
        for (int k = 0; k < a.cols_; ++k) s += a.at(i, k) * b.at(k, j);
        r.at(i, j) = s;
      }
    return r;
  }

  friend PolyGrid operator-(const PolyGrid& a, const PolyGrid& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_ || a.nvars_ != b.nvars_)
      throw std::invalid_argument("PolyGrid: shape mismatch in -");
    PolyGrid r(a.nvars_, a.rows_, a.cols_);
    for (size_t k = 0; k < a.entries_.size(); ++k)
      r.entries_[k] = a.entries_[k] - b.entries_[k];
    return r;
  }

  Eigen::MatrixXd eval(const Eigen::VectorXd& u) const {
    Eigen::MatrixXd r(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r(i, j) = at(i, j).eval(u);
    return r;
  }

 private:
  size_t index(int i, int j) const {
    if (i < 0 || j < 0 || i >= rows_ || j >= cols_)
      throw std::out_of_range("PolyGrid: entry index out of range");
    return static_cast<size_t>(i) * cols_ + j;
  }

  int nvars_;
  int rows_, cols_;
  std::vector<Polynomial> entries_;
};

inline Polynomial det_of_grid(const PolyGrid& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("det_of_grid: not square");
  const int m = a.rows();
  if (m == 0) return Polynomial::constant(a.nvars(), 1.0);
  if (m == 1) return a.at(0, 0);
  Polynomial d(a.nvars());
  for (int j = 0; j < m; ++j) {
    if (a.at(0, j).is_zero()) continue;
    Polynomial term = a.at(0, j) * det_of_grid(a.minor_drop(0, j));
    if (j % 2 == 1) term *= -1.0;
    d += term;
  }
  return d;
}

inline Eigen::MatrixXd eval_matrix(const PolyMatrix& g, const Eigen::VectorXd& u) {
  if (u.size() != g.nvars())
    throw std::invalid_argument("eval_matrix: point dimension != nvars");
  return g.eval(u);
}

inline PolyMatrix partial_matrix(const PolyMatrix& g, int i) { return g.partial(i); }

inline PolyMatrix hessian(const Polynomial& p) {
  PolyMatrix h(p.nvars(), p.nvars());
  for (int i = 0; i < p.nvars(); ++i) {
    Polynomial pi = p.partial(i);
    for (int j = i; j < p.nvars(); ++j) h.set(i, j, pi.partial(j));
  }
  return h;
}

// dG(u)[d] = sum_i d_i * (dG/dx_i)(u)
inline Eigen::MatrixXd grad_apply(const PolyMatrix& g, const Eigen::VectorXd& u,
                                  const Eigen::VectorXd& d) {
  if (u.size() != g.nvars() || d.size() != g.nvars())
    throw std::invalid_argument("grad_apply: dimension mismatch");
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(g.size(), g.size());
  for (int i = 0; i < g.nvars(); ++i) {
    if (d[i] == 0.0) continue;
    r += d[i] * g.partial(i).eval(u);
  }
  return r;
}

// adjoint map: component i is <(dG/dx_i)(u), X>
inline Eigen::VectorXd grad_adjoint(const PolyMatrix& g, const Eigen::VectorXd& u,
                                    const Eigen::MatrixXd& x) {
  if (u.size() != g.nvars())
    throw std::invalid_argument("grad_adjoint: point dimension != nvars");
  if (x.rows() != g.size() || x.cols() != g.size())
    throw std::invalid_argument("grad_adjoint: matrix shape mismatch");
  Eigen::VectorXd r(g.nvars());
  for (int i = 0; i < g.nvars(); ++i)
    r[i] = g.partial(i).eval(u).cwiseProduct(x).sum();
  return r;
}

// Cofactor-expansion determinant and adjugate; A * adj(A) = det(A) * I as
// polynomials. Intended for the small pivot blocks of Schur reductions.
inline std::pair<Polynomial, PolyMatrix> det_adjugate(const PolyMatrix& a) {
  const int m = a.size();
  if (m > 8) throw std::invalid_argument("det_adjugate: size > 8 unsupported");
  const PolyGrid grid = PolyGrid::from_symmetric(a);
  Polynomial det = det_of_grid(grid);
  PolyMatrix adj(a.nvars(), m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      // adj(A)_ij = (-1)^{i+j} * minor_ji; symmetry of A makes adj symmetric
      Polynomial c = det_of_grid(grid.minor_drop(j, i));
      if ((i + j) % 2 == 1) c *= -1.0;
      adj.set(i, j, c);
    }
  return {std::move(det), std::move(adj)};
}

}  // namespace pmo
