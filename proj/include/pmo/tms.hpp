#pragma once

#include <Eigen/Core>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "pmo/polynomial.hpp"

namespace pmo {

// Truncated moment sequence: one value y_alpha for every |alpha| <= order,
// stored dense over the graded-lex basis.
class Tms {
 public:
  Tms(int nvars, int order)
      : basis_(nvars, order), vals_(Eigen::VectorXd::Zero(basis_.size())) {}

  int nvars() const { return basis_.nvars(); }
  int order() const { return basis_.degree(); }
  const MonomialBasis& basis() const { return basis_; }

  const Eigen::VectorXd& values() const { return vals_; }
  Eigen::VectorXd& values() { return vals_; }

  double value(const Exponents& e) const { return vals_[basis_.index_of(e)]; }
  void set(const Exponents& e, double v) { vals_[basis_.index_of(e)] = v; }

  // Riesz functional: p -> sum_alpha p_alpha y_alpha
  double riesz(const Polynomial& p) const {
    if (p.nvars() != nvars())
      throw std::invalid_argument("riesz: polynomial has wrong variable count");
    if (p.degree() > order())
      throw std::invalid_argument("riesz: polynomial degree exceeds sequence order");
    double s = 0.0;
    for (const auto& [m, c] : p.terms()) s += c * vals_[basis_.index_of(m.exps)];
    return s;
  }

 private:
  MonomialBasis basis_;
  Eigen::VectorXd vals_;
};

inline double riesz(const Tms& y, const Polynomial& p) { return y.riesz(p); }

// Finitely atomic probability measure: points u_j with positive weights
// summing to one.
struct AtomicMeasure {
  std::vector<Eigen::VectorXd> atoms;
  Eigen::VectorXd weights;

  void validate() const {
    if (static_cast<int>(atoms.size()) != weights.size())
      throw std::invalid_argument("AtomicMeasure: atom/weight count mismatch");
    for (int j = 0; j < weights.size(); ++j)
      if (!(weights[j] > 0.0))
        throw std::invalid_argument("AtomicMeasure: weights must be positive");
    if (std::abs(weights.sum() - 1.0) > 1e-8)
      throw std::invalid_argument("AtomicMeasure: weights must sum to 1");
  }
};

inline Tms tms_from_atoms(const AtomicMeasure& mu, int order) {
  mu.validate();
  const int n = mu.atoms.empty() ? 0 : static_cast<int>(mu.atoms[0].size());
  Tms y(n, order);
  for (int idx = 0; idx < y.basis().size(); ++idx) {
    const Exponents& e = y.basis()[idx];
    double s = 0.0;
    for (size_t j = 0; j < mu.atoms.size(); ++j) {
      double t = mu.weights[static_cast<int>(j)];
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < e[i]; ++k) t *= mu.atoms[j][i];
      s += t;
    }
    y.values()[idx] = s;
  }
  return y;
}

}  // namespace pmo
