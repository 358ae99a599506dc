#pragma once

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pmo/polymatrix.hpp"
#include "pmo/svec.hpp"

namespace pmo {

struct InfeasiblePoint : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoPivotBlock : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline int svd_rank(const Eigen::MatrixXd& a, double rel_tol) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const double top = svd.singularValues()[0];
  if (top <= 0.0) return 0;
  int r = 0;
  while (r < svd.singularValues().size() && svd.singularValues()[r] >= rel_tol * top) ++r;
  return r;
}

}  // namespace detail

// numerical rank and orthonormal kernel basis of G(u); eigenvalues below
// rank_tol * lambda_max count as zero
inline std::pair<int, Eigen::MatrixXd> kernel_basis(const PolyMatrix& g,
                                                    const Eigen::VectorXd& u,
                                                    double rank_tol = 1e-6,
                                                    double feas_tol = 1e-6) {
  const Eigen::MatrixXd gu = g.eval(u);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gu);
  const Eigen::VectorXd& ev = es.eigenvalues();  // ascending
  if (ev.size() && ev[0] < -feas_tol)
    throw InfeasiblePoint("kernel_basis: G(u) has eigenvalue " + std::to_string(ev[0]) +
                          " below the feasibility tolerance");
  const int m = g.size();
  const double top = ev.size() ? ev.cwiseAbs().maxCoeff() : 0.0;
  int r = 0;
  for (int i = 0; i < m; ++i)
    if (ev[i] > rank_tol * top) ++r;
  Eigen::MatrixXd e = es.eigenvectors().leftCols(m - r);
  return {r, e};
}

// rows of the constraint-derivative map restricted to the kernel:
// row i = svec(E' dG/dx_i(u) E), so the map h -> sum h_i E'(dG[h])E is psi' h
inline Eigen::MatrixXd constraint_map(const PolyMatrix& g, const Eigen::VectorXd& u,
                                      const Eigen::MatrixXd& e) {
  const int n = g.nvars();
  const int d = static_cast<int>(e.cols());
  Eigen::MatrixXd psi(n, svec_len(d));
  for (int i = 0; i < n; ++i) {
    const Eigen::MatrixXd di = g.partial(i).eval(u);
    psi.row(i) = svec(e.transpose() * di * e).transpose();
  }
  return psi;
}

struct NdcResult {
  bool holds = false;
  int rank_g = 0;
  Eigen::MatrixXd kernel;
  Eigen::VectorXd singular_values;  // of the n x sigma(m-r) map
};

// nondegeneracy: the map h -> E'(dG(u)[h])E must cover all of S^{m-r}
inline NdcResult check_ndc(const PolyMatrix& g, const Eigen::VectorXd& u,
                           double rank_tol = 1e-6, double feas_tol = 1e-6) {
  NdcResult out;
  auto [r, e] = kernel_basis(g, u, rank_tol, feas_tol);
  out.rank_g = r;
  out.kernel = e;
  const int target = svec_len(static_cast<int>(e.cols()));
  if (target == 0) {
    out.holds = true;  // G(u) > 0: nothing to cover
    return out;
  }
  const Eigen::MatrixXd psi = constraint_map(g, u, e);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(psi);
  out.singular_values = svd.singularValues();
  const double top = out.singular_values.size() ? out.singular_values[0] : 0.0;
  int rank = 0;
  if (top > 0.0)
    while (rank < out.singular_values.size() &&
           out.singular_values[rank] >= rank_tol * top)
      ++rank;
  out.holds = (rank == target);
  return out;
}

struct MultiplierResult {
  Eigen::MatrixXd lambda;
  double residual = 0.0;
  bool ndc_holds = false;  // when false the least-squares multiplier may be non-unique
};

// least-squares stationarity multiplier constrained to range(Lambda) in ker G(u)
inline MultiplierResult solve_multiplier(const Polynomial& f, const PolyMatrix& g,
                                         const Eigen::VectorXd& u, double rank_tol = 1e-6,
                                         double feas_tol = 1e-6) {
  MultiplierResult out;
  NdcResult ndc = check_ndc(g, u, rank_tol, feas_tol);
  out.ndc_holds = ndc.holds;
  const Eigen::VectorXd grad = eval_gradient(f, u);
  const int m = g.size();
  const int d = static_cast<int>(ndc.kernel.cols());
  if (d == 0) {
    out.lambda = Eigen::MatrixXd::Zero(m, m);
    out.residual = grad.norm();
    return out;
  }
  const Eigen::MatrixXd psi = constraint_map(g, u, ndc.kernel);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(psi, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd w = svd.solve(grad);
  out.lambda = ndc.kernel * smat(w, d) * ndc.kernel.transpose();
  out.residual = (grad - psi * w).norm();
  return out;
}

// strict complementarity: rank G(u) + rank Lambda = m
inline bool check_scc(const PolyMatrix& g, const Eigen::VectorXd& u,
                      const Eigen::MatrixXd& lambda, double rank_tol = 1e-6,
                      double feas_tol = 1e-6) {
  auto [r, e] = kernel_basis(g, u, rank_tol, feas_tol);
  return r + detail::svd_rank(lambda, rank_tol) == g.size();
}

struct SoscResult {
  bool holds = false;
  double min_eig = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd nullspace;  // orthonormal basis of N(u)
};

// second order sufficient condition on N(u) = ker psi', with the curvature
// correction 2<Lambda, dG G(u)^+ dG>
inline SoscResult check_sosc(const Polynomial& f, const PolyMatrix& g,
                             const Eigen::VectorXd& u, const Eigen::MatrixXd& lambda,
                             double rank_tol = 1e-6, double feas_tol = 1e-6) {
  SoscResult out;
  const int n = g.nvars();
  const int m = g.size();
  auto [r, e] = kernel_basis(g, u, rank_tol, feas_tol);

  if (e.cols() == 0) {
    out.nullspace = Eigen::MatrixXd::Identity(n, n);
  } else {
    const Eigen::MatrixXd psi = constraint_map(g, u, e);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(psi, Eigen::ComputeFullU | Eigen::ComputeThinV);
    const double top = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
    int rank = 0;
    if (top > 0.0)
      while (rank < svd.singularValues().size() &&
             svd.singularValues()[rank] >= rank_tol * top)
        ++rank;
    out.nullspace = svd.matrixU().rightCols(n - rank);
  }
  if (out.nullspace.cols() == 0) {
    out.holds = true;  // N(u) = {0}
    return out;
  }

  const Eigen::MatrixXd gu = g.eval(u);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gu);
  const double top = es.eigenvalues().size() ? es.eigenvalues().cwiseAbs().maxCoeff() : 0.0;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(m);
  for (int i = 0; i < m; ++i)
    if (es.eigenvalues()[i] > rank_tol * top) inv[i] = 1.0 / es.eigenvalues()[i];
  const Eigen::MatrixXd gdag =
      es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();

  std::vector<Eigen::MatrixXd> di(n);
  for (int i = 0; i < n; ++i) di[i] = g.partial(i).eval(u);

  Eigen::MatrixXd w = hessian(f).eval(u);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double second = (lambda.array() * g.partial(i).partial(j).eval(u).array()).sum();
      const double curv = 2.0 * (lambda * di[i] * gdag * di[j]).trace();
      w(i, j) += -second + curv;
      if (i != j) w(j, i) = w(i, j);
    }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ew(
      (out.nullspace.transpose() * w * out.nullspace).eval(), Eigen::EigenvaluesOnly);
  out.min_eig = ew.eigenvalues().minCoeff();
  out.holds = out.min_eig > 1e-7 * (1.0 + w.norm());
  return out;
}

struct SchurReduction {
  std::vector<int> permutation;  // pivot indices first, complement after
  int r = 0;                     // pivot block size
  Polynomial p;                  // det of the pivot block
  PolyMatrix t;                  // p^2 C - p B' adj(A) B over the complement indices
};

// polynomial Schur complement of the maximal nonsingular principal block of
// G(u), pivot order chosen by greedy pivoted Cholesky on G(u)
inline SchurReduction schur_reduce(const PolyMatrix& g, const Eigen::VectorXd& u,
                                   double rank_tol = 1e-6, double feas_tol = 1e-6) {
  const int m = g.size();
  auto [r, ekern] = kernel_basis(g, u, rank_tol, feas_tol);
  if (r == 0) throw NoPivotBlock("schur_reduce: G(u) has numerical rank 0");

  Eigen::MatrixXd s = g.eval(u);
  const double scale = std::max(s.diagonal().maxCoeff(), 0.0);
  std::vector<int> pivots;
  std::vector<bool> used(m, false);
  for (int step = 0; step < r; ++step) {
    int best = -1;
    double best_val = rank_tol * scale;
    for (int i = 0; i < m; ++i)
      if (!used[i] && s(i, i) > best_val) {
        best = i;
        best_val = s(i, i);
      }
    if (best < 0)
      throw NoPivotBlock("schur_reduce: no principal block of rank " + std::to_string(r) +
                         " is numerically nonsingular at u");
    used[best] = true;
    pivots.push_back(best);
    // rank-one elimination of the chosen pivot
    const Eigen::VectorXd col = s.col(best) / s(best, best);
    s -= (s(best, best) * col) * col.transpose();
  }

  SchurReduction out;
  out.r = r;
  out.permutation = pivots;
  for (int i = 0; i < m; ++i)
    if (!used[i]) out.permutation.push_back(i);

  const int n = g.nvars();
  PolyMatrix a(n, r);
  for (int i = 0; i < r; ++i)
    for (int j = i; j < r; ++j) a.set(i, j, g.at(pivots[i], pivots[j]));
  auto [p, adj] = det_adjugate(a);
  out.p = p;

  const int mc = m - r;
  PolyGrid b(n, r, mc);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < mc; ++j) b.at(i, j) = g.at(pivots[i], out.permutation[r + j]);
  const PolyGrid adj_grid = PolyGrid::from_symmetric(adj);
  const PolyGrid btab = b.transpose() * adj_grid * b;

  PolyMatrix t(n, mc);
  for (int i = 0; i < mc; ++i)
    for (int j = i; j < mc; ++j) {
      Polynomial cij = g.at(out.permutation[r + i], out.permutation[r + j]);
      t.set(i, j, p * p * cij - p * btab.at(i, j));
    }
  out.t = t;
  return out;
}

struct OptimalityReport {
  Eigen::VectorXd point;
  int rank_g = 0;
  Eigen::MatrixXd kernel;
  Eigen::MatrixXd lambda;
  double stationarity_residual = 0.0;
  bool ndc = false;
  Eigen::VectorXd ndc_singular_values;
  bool scc = false;
  int rank_lambda = 0;
  bool sosc = false;
  double sosc_min_eig = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd nullspace;
  // consistency extras
  double grad_det_norm = std::numeric_limits<double>::quiet_NaN();
  bool schur_checked = false;
  bool schur_map_regular = false;
  double theta_residual = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::string> warnings;
};

struct AuditOptions {
  double rank_tol = 1e-6;
  double feas_tol = 1e-6;
};

// one-stop audit: kernel, NDC, multiplier, SCC, SOSC, plus the reduced-form
// cross checks through the Schur complement when they apply
inline OptimalityReport audit(const Polynomial& f, const PolyMatrix& g,
                              const Eigen::VectorXd& u, const AuditOptions& opts = {}) {
  OptimalityReport rep;
  rep.point = u;
  const int m = g.size();
  const int n = g.nvars();

  NdcResult ndc = check_ndc(g, u, opts.rank_tol, opts.feas_tol);
  rep.rank_g = ndc.rank_g;
  rep.kernel = ndc.kernel;
  rep.ndc = ndc.holds;
  rep.ndc_singular_values = ndc.singular_values;

  MultiplierResult mult = solve_multiplier(f, g, u, opts.rank_tol, opts.feas_tol);
  rep.lambda = mult.lambda;
  rep.stationarity_residual = mult.residual;
  if (!mult.ndc_holds && rep.stationarity_residual > 0.0)
    rep.warnings.push_back("multiplier computed without nondegeneracy; it may be non-unique");

  rep.rank_lambda = detail::svd_rank(rep.lambda, opts.rank_tol);
  rep.scc = (rep.rank_g + rep.rank_lambda == m);

  SoscResult sosc = check_sosc(f, g, u, rep.lambda, opts.rank_tol, opts.feas_tol);
  rep.sosc = sosc.holds;
  rep.sosc_min_eig = sosc.min_eig;
  rep.nullspace = sosc.nullspace;

  if (m <= 8) {
    const Polynomial det = det_adjugate(g).first;
    rep.grad_det_norm = eval_gradient(det, u).norm();
  }

  if (rep.ndc && rep.rank_g >= 1 && rep.rank_g < m && rep.rank_g <= 8) {
    try {
      SchurReduction red = schur_reduce(g, u, opts.rank_tol, opts.feas_tol);
      rep.schur_checked = true;
      const int mc = m - red.r;
      Eigen::MatrixXd psi_t(n, svec_len(mc));
      for (int i = 0; i < n; ++i) psi_t.row(i) = svec(red.t.partial(i).eval(u)).transpose();
      rep.schur_map_regular = (detail::svd_rank(psi_t, opts.rank_tol) == svec_len(mc));
      if (rep.schur_map_regular != rep.ndc)
        rep.warnings.push_back(
            "reduced-map regularity disagrees with the nondegeneracy verdict");
      const double pu = red.p.eval(u);
      Eigen::MatrixXd theta(mc, mc);
      for (int i = 0; i < mc; ++i)
        for (int j = 0; j < mc; ++j)
          theta(i, j) =
              rep.lambda(red.permutation[red.r + i], red.permutation[red.r + j]) / (pu * pu);
      const Eigen::VectorXd grad = eval_gradient(f, u);
      rep.theta_residual = (grad - grad_adjoint(red.t, u, theta)).norm();
      if (rep.theta_residual > 1e-6 * (1.0 + grad.norm()))
        rep.warnings.push_back("reduced-form multiplier fails stationarity at the point");
    } catch (const NoPivotBlock& ex) {
      rep.warnings.push_back(ex.what());
    }
  }
  return rep;
}

}  // namespace pmo
