#pragma once

#include <Eigen/Core>
#include <cmath>
#include <stdexcept>

namespace pmo {

// Isometric vectorization of symmetric matrices: sqrt(2)-scaled off-diagonal
// entries so that dot(svec(A), svec(B)) equals the Frobenius inner product.
// Ordering is the row-major upper triangle.

inline int svec_len(int m) { return m * (m + 1) / 2; }

inline int svec_index(int m, int i, int j) {
  if (i > j) std::swap(i, j);
  return i * m - i * (i - 1) / 2 + (j - i);
}

inline Eigen::VectorXd svec(const Eigen::MatrixXd& s) {
  const int m = static_cast<int>(s.rows());
  if (s.cols() != m) throw std::invalid_argument("svec: matrix not square");
  static const double rt2 = std::sqrt(2.0);
  Eigen::VectorXd v(svec_len(m));
  int p = 0;
  for (int i = 0; i < m; ++i) {
    v[p++] = s(i, i);
    for (int j = i + 1; j < m; ++j) v[p++] = rt2 * 0.5 * (s(i, j) + s(j, i));
  }
  return v;
}

inline Eigen::MatrixXd smat(const Eigen::VectorXd& v, int m) {
  if (v.size() != svec_len(m)) throw std::invalid_argument("smat: length mismatch");
  static const double irt2 = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXd s(m, m);
  int p = 0;
  for (int i = 0; i < m; ++i) {
    s(i, i) = v[p++];
    for (int j = i + 1; j < m; ++j) {
      const double w = irt2 * v[p++];
      s(i, j) = w;
      s(j, i) = w;
    }
  }
  return s;
}

}  // namespace pmo
