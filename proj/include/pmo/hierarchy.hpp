#pragma once

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "pmo/relaxation.hpp"
#include "pmo/tms.hpp"

namespace pmo {

struct ExtractionFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// numerical rank with a decidability guard: the singular values kept and
// dropped must be separated by a factor of 100, otherwise callers should not
// act on the rank estimate
struct RankEstimate {
  int rank = 0;
  bool decided = true;
};

inline RankEstimate numerical_rank(const Eigen::MatrixXd& a, double rank_tol) {
  RankEstimate out;
  if (a.rows() == 0) return out;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double top = sv[0];
  if (top <= 0.0) return out;
  int r = 0;
  while (r < sv.size() && sv[r] >= rank_tol * top) ++r;
  out.rank = r;
  if (r < sv.size()) {
    const double next = std::max(sv[r], std::numeric_limits<double>::min());
    out.decided = sv[r - 1] / next >= 100.0;
  }
  return out;
}

struct FlatTruncation {
  bool found = false;
  int t = -1;    // smallest order where the rank condition held
  int rank = 0;  // shared rank of M_t and M_{t - dhat}
};

// rank M_t == rank M_{t - dhat} for some t in [dhat, k], dhat = max(d_G, 1);
// undecided rank estimates at an order simply rule that order out
inline FlatTruncation check_flat_truncation(const Tms& y, int dg, double rank_tol = 1e-6) {
  FlatTruncation out;
  const int k = y.order() / 2;
  const int dhat = std::max(dg, 1);
  for (int t = dhat; t <= k; ++t) {
    const RankEstimate low = numerical_rank(moment_matrix(y, t - dhat), rank_tol);
    if (!low.decided) continue;
    const RankEstimate high = numerical_rank(moment_matrix(y, t), rank_tol);
    if (!high.decided) continue;
    if (low.rank == high.rank) {
      out.found = true;
      out.t = t;
      out.rank = high.rank;
      return out;
    }
  }
  return out;
}

// Atom recovery from a flat truncated moment sequence. Pivot columns of the
// low-order moment matrix select a monomial basis; least squares against the
// shifted columns of the next moment matrix yields multiplication operators,
// whose simultaneous eigenvectors (via a Schur form of a random combination)
// give the support points. Weights come from a Vandermonde fit.
inline AtomicMeasure extract_atoms(const Tms& y, int t, int dg, unsigned seed = 0,
                                   double atom_tol = 1e-6, double rank_tol = 1e-6) {
  const int n = y.nvars();
  const int dhat = std::max(dg, 1);
  const int tlow = t - dhat;
  if (tlow < 0 || 2 * (tlow + 1) > y.order())
    throw std::invalid_argument("extract_atoms: order out of range");

  const Eigen::MatrixXd mlow = moment_matrix(y, tlow);
  const RankEstimate re = numerical_rank(mlow, rank_tol);
  if (!re.decided || re.rank == 0)
    throw ExtractionFailed("extract_atoms: rank of the pivot moment matrix is undecided");
  const int r = re.rank;

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(mlow);
  std::vector<int> pivots(r);
  for (int i = 0; i < r; ++i) pivots[i] = qr.colsPermutation().indices()[i];

  const MonomialBasis blow(n, tlow);
  const MonomialBasis bbig(n, tlow + 1);
  const Eigen::MatrixXd mbig = moment_matrix(y, tlow + 1);
  Eigen::MatrixXd base(mbig.rows(), r);
  for (int j = 0; j < r; ++j) base.col(j) = mbig.col(pivots[j]);
  Eigen::JacobiSVD<Eigen::MatrixXd> base_svd(base, Eigen::ComputeThinU | Eigen::ComputeThinV);

  std::vector<Eigen::MatrixXd> mult(n);
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd shifted(mbig.rows(), r);
    for (int j = 0; j < r; ++j) {
      Exponents e = blow[pivots[j]];
      e[i] += 1;
      shifted.col(j) = mbig.col(bbig.index_of(e));
    }
    mult[i] = base_svd.solve(shifted);
  }

  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(0.1, 1.0);
  Eigen::VectorXd comb(n);
  for (int i = 0; i < n; ++i) comb[i] = unif(rng);
  comb /= comb.sum();
  Eigen::MatrixXd mix = Eigen::MatrixXd::Zero(r, r);
  for (int i = 0; i < n; ++i) mix += comb[i] * mult[i];

  Eigen::RealSchur<Eigen::MatrixXd> schur(mix);
  if (schur.info() != Eigen::Success)
    throw ExtractionFailed("extract_atoms: Schur decomposition failed");
  const Eigen::MatrixXd& tt = schur.matrixT();
  for (int i = 0; i + 1 < r; ++i)
    if (tt(i + 1, i) != 0.0)
      throw ExtractionFailed("extract_atoms: multiplication operator has complex spectrum");
  const Eigen::MatrixXd& qmat = schur.matrixU();

  AtomicMeasure mu;
  mu.atoms.resize(r, Eigen::VectorXd::Zero(n));
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < n; ++i) mu.atoms[j][i] = qmat.col(j).dot(mult[i] * qmat.col(j));

  const MonomialBasis fit(n, 2 * t);
  Eigen::MatrixXd vand(fit.size(), r);
  Eigen::VectorXd rhs(fit.size());
  for (int row = 0; row < fit.size(); ++row) {
    const Exponents& e = fit[row];
    rhs[row] = y.value(e);
    for (int j = 0; j < r; ++j) {
      double v = 1.0;
      for (int i = 0; i < n; ++i)
        for (int p = 0; p < e[i]; ++p) v *= mu.atoms[j][i];
      vand(row, j) = v;
    }
  }
  mu.weights =
      vand.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rhs);
  const double fit_err = (vand * mu.weights - rhs).cwiseAbs().maxCoeff();
  if (fit_err > atom_tol)
    throw ExtractionFailed("extract_atoms: moment fit residual " + std::to_string(fit_err) +
                           " exceeds tolerance");
  if (mu.weights.minCoeff() <= 1e-8)
    throw ExtractionFailed("extract_atoms: nonpositive weight in the recovered measure");
  mu.weights /= mu.weights.sum();
  return mu;
}

struct OrderResult {
  int k = 0;
  SdpStatus status = SdpStatus::NumericalTrouble;
  double mom_value = std::numeric_limits<double>::quiet_NaN();
  double sos_value = std::numeric_limits<double>::quiet_NaN();
  double primal_residual = 0.0, dual_residual = 0.0, gap = 0.0;
  int iterations = 0;
  Tms moments;
  std::optional<QmCertificate> certificate;
  double certificate_residual = std::numeric_limits<double>::quiet_NaN();

  OrderResult(int nvars, int order) : moments(nvars, order) {}
};

// One order of the hierarchy. A single cone solve yields both sides: the
// optimal value of the moment program and, from its dual multipliers, the
// Gram matrices certifying the matching lower bound.
inline OrderResult solve_order(const Polynomial& f, const PolyMatrix& g, int k,
                               const SolveOptions& opts = {}) {
  MomentAssembly ma = assemble_moment_relaxation(f, g, k);
  OrderResult out(g.nvars(), 2 * k);
  out.k = k;
  SdpSolution sol = solve(ma.problem, opts);
  out.status = sol.status;
  out.primal_residual = sol.primal_residual;
  out.dual_residual = sol.dual_residual;
  out.gap = sol.gap;
  out.iterations = sol.iterations;
  if (sol.status != SdpStatus::Optimal) return out;
  out.mom_value = sol.pcost;
  out.sos_value = sol.dcost;
  out.moments.values() = sol.y;

  QmCertificate cert;
  cert.k = k;
  cert.gamma = sol.dcost;
  cert.q0 = sol.block_duals[0];
  cert.q1 = sol.block_duals[1];
  out.certificate_residual = certificate_residual(f, cert, g);
  if (out.certificate_residual <= 1e-6 * (1.0 + f.max_abs_coeff()))
    out.certificate = std::move(cert);
  return out;
}

struct HierarchyOptions {
  int k_min = 0;  // 0 selects max(ceil(deg f / 2), d_G, 1)
  int k_max = 6;
  double rank_tol = 1e-6;
  double atom_tol = 1e-6;
  unsigned seed = 0;
  SolveOptions solve;
};

struct HierarchyResult {
  std::vector<OrderResult> orders;
  bool converged = false;
  int k_star = -1;
  double value = std::numeric_limits<double>::quiet_NaN();
  std::optional<AtomicMeasure> minimizers;
  FlatTruncation flat;
  std::string message;
};

inline int default_k_min(const Polynomial& f, const PolyMatrix& g) {
  return std::max({(f.degree() + 1) / 2, degree_param(g), 1});
}

// Rising orders until flat truncation certifies finite convergence: the
// recovered atoms must be feasible and attain the relaxation bound, otherwise
// the hierarchy keeps going
inline HierarchyResult run_hierarchy(const Polynomial& f, const PolyMatrix& g,
                                     const HierarchyOptions& hopts = {}) {
  HierarchyResult out;
  const int k_min = hopts.k_min > 0 ? hopts.k_min : default_k_min(f, g);
  if (hopts.k_max < k_min) throw std::invalid_argument("run_hierarchy: k_max below k_min");
  const int dg = degree_param(g);
  for (int k = k_min; k <= hopts.k_max; ++k) {
    out.orders.push_back(solve_order(f, g, k, hopts.solve));
    const OrderResult& res = out.orders.back();
    if (res.status == SdpStatus::Infeasible) {
      out.message = "moment relaxation infeasible at order " + std::to_string(k) +
                    "; the constraint set admits no measure";
      return out;
    }
    if (res.status != SdpStatus::Optimal) {
      out.message = "cone solve at order " + std::to_string(k) + " ended with status " +
                    to_string(res.status);
      return out;
    }
    out.value = res.mom_value;

    FlatTruncation flat = check_flat_truncation(res.moments, dg, hopts.rank_tol);
    if (!flat.found) continue;
    out.flat = flat;
    AtomicMeasure mu;
    try {
      mu = extract_atoms(res.moments, flat.t, dg, hopts.seed, hopts.atom_tol,
                         hopts.rank_tol);
    } catch (const ExtractionFailed& ex) {
      out.message = std::string(ex.what()) + " (order " + std::to_string(k) + ")";
      out.flat = FlatTruncation{};
      continue;
    }
    const double value_tol = std::max(1e-6, 1e-6 * std::abs(res.mom_value));
    bool ok = true;
    for (const Eigen::VectorXd& u : mu.atoms) {
      if (min_eigenvalue(g.eval(u)) < -1e-6 || std::abs(f.eval(u) - res.mom_value) > value_tol) {
        ok = false;
        break;
      }
    }
    if (!ok) {
      out.message = "extracted atoms failed feasibility or optimality validation at order " +
                    std::to_string(k);
      out.flat = FlatTruncation{};
      continue;
    }
    out.converged = true;
    out.k_star = k;
    out.minimizers = std::move(mu);
    return out;
  }
  if (out.message.empty())
    out.message = "flat truncation not observed up to order " + std::to_string(hopts.k_max);
  return out;
}

}  // namespace pmo
