#pragma once

#include <Eigen/Eigenvalues>
#include <optional>
#include <string>
#include <utility>

#include "pmo/ipm.hpp"
#include "pmo/moment.hpp"
#include "pmo/svec.hpp"

namespace pmo {

// Moment-side relaxation of order k:
//   min  sum_alpha f_alpha y_alpha
//   s.t. M_k[y] >= 0,  L_G^{(k)}[y] >= 0,  y_0 = 1
// Variables are the moments y_alpha, |alpha| <= 2k, in graded-lex order.
struct MomentAssembly {
  SdpProblem problem;
  MonomialBasis vars;       // alpha <-> variable index
  int k = 0, dg = 0;
  int mom_size = 0;         // dimension of the M_k block
  int loc_size = 0;         // dimension of the block localizing matrix
  int loc_basis_size = 0;   // common basis size s(k - dg) of its blocks

  MomentAssembly(int nvars, int order) : vars(nvars, order) {}
};

inline MomentAssembly assemble_moment_relaxation(const Polynomial& f, const PolyMatrix& g,
                                                 int k) {
  const int n = g.nvars();
  if (f.nvars() != n)
    throw std::invalid_argument("assemble_moment_relaxation: variable count mismatch");
  const int dg = degree_param(g);
  if (f.degree() > 2 * k)
    throw std::invalid_argument("assemble_moment_relaxation: deg f exceeds 2k");
  if (dg > k)
    throw std::invalid_argument("assemble_moment_relaxation: k below degree parameter of G");

  MomentAssembly out(n, 2 * k);
  out.k = k;
  out.dg = dg;
  const int N = out.vars.size();
  SdpProblem& p = out.problem;
  p.nvars = N;
  p.c = Eigen::VectorXd::Zero(N);
  for (const auto& [mono, coef] : f.terms()) p.c[out.vars.index_of(mono.exps)] += coef;

  const MonomialBasis bk(n, k);
  out.mom_size = bk.size();
  PsdBlockMap mom;
  mom.size = bk.size();
  mom.fj.resize(N);
  for (int a = 0; a < bk.size(); ++a)
    for (int b = a; b < bk.size(); ++b)
      mom.fj[out.vars.index_of(add_exps(bk[a], bk[b]))].push_back({a, b, 1.0});
  p.blocks.push_back(std::move(mom));

  const MonomialBasis bt(n, k - dg);
  const int s1 = bt.size();
  const int m = g.size();
  out.loc_basis_size = s1;
  out.loc_size = m * s1;
  PsdBlockMap loc;
  loc.size = m * s1;
  loc.fj.resize(N);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      const Polynomial& gij = g.at(i, j);
      if (gij.is_zero()) continue;
      for (int a = 0; a < s1; ++a) {
        const int bstart = (i == j) ? a : 0;
        for (int b = bstart; b < s1; ++b) {
          const int row = i * s1 + a;
          const int col = j * s1 + b;
          const Exponents ab = add_exps(bt[a], bt[b]);
          for (const auto& [mono, coef] : gij.terms())
            loc.fj[out.vars.index_of(add_exps(ab, mono.exps))].push_back({row, col, coef});
        }
      }
    }
  p.blocks.push_back(std::move(loc));

  p.neq = 1;
  p.b = Eigen::VectorXd::Ones(1);
  p.eq.push_back({0, out.vars.index_of(Exponents(n, 0)), 1.0});
  return out;
}

// SOS-side relaxation of order k:
//   max  gamma
//   s.t. f - gamma = <Q0, [x]_k [x]_k'> + <Q1, Z(x)>,  Q0 >= 0, Q1 >= 0
// where Z(x) has block (i,j) = G_ij(x) * [x]_t [x]_t', t = k - d_G. Variables
// are gamma (when present) and the upper-triangle entries of the Grams.
struct SosAssembly {
  SdpProblem problem;
  int k = 0, dg = 0, m = 0;
  int q0_size = 0;       // dimension of Q0, = s(k)
  int q1_size = 0;       // dimension of Q1, = m * s(k - dg)
  int q1_basis_size = 0; // s(k - dg)
  int gamma_var = -1;    // variable index of gamma, -1 if target is fixed
  int q0_off = 0, q1_off = 0;

  int q0_var(int p, int q) const { return q0_off + svec_index(q0_size, p, q); }
  int q1_var(int p, int q) const { return q1_off + svec_index(q1_size, p, q); }

  Eigen::MatrixXd read_q0(const Eigen::VectorXd& y) const {
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(q0_size, q0_size);
    for (int p = 0; p < q0_size; ++p)
      for (int r = p; r < q0_size; ++r) q(p, r) = q(r, p) = y[q0_var(p, r)];
    return q;
  }
  Eigen::MatrixXd read_q1(const Eigen::VectorXd& y) const {
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(q1_size, q1_size);
    for (int p = 0; p < q1_size; ++p)
      for (int r = p; r < q1_size; ++r) q(p, r) = q(r, p) = y[q1_var(p, r)];
    return q;
  }
};

// target: the polynomial the quadratic-module combination must reproduce
// (f when gamma is a variable, f - gamma when it is fixed)
inline SosAssembly assemble_gram_matching(const Polynomial& target, const PolyMatrix& g, int k,
                                          bool with_gamma) {
  const int n = g.nvars();
  if (target.nvars() != n)
    throw std::invalid_argument("sos relaxation: variable count mismatch");
  const int dg = degree_param(g);
  if (target.degree() > 2 * k)
    throw std::invalid_argument("sos relaxation: deg f exceeds 2k");
  if (dg > k) throw std::invalid_argument("sos relaxation: k below degree parameter of G");

  SosAssembly out;
  out.k = k;
  out.dg = dg;
  out.m = g.size();
  const MonomialBasis bk(n, k);
  const MonomialBasis bt(n, k - dg);
  const MonomialBasis ball(n, 2 * k);
  const int s0 = bk.size();
  const int s1 = bt.size();
  out.q0_size = s0;
  out.q1_basis_size = s1;
  out.q1_size = g.size() * s1;
  out.gamma_var = with_gamma ? 0 : -1;
  out.q0_off = with_gamma ? 1 : 0;
  out.q1_off = out.q0_off + svec_len(s0);
  const int N = out.q1_off + svec_len(out.q1_size);

  SdpProblem& p = out.problem;
  p.nvars = N;
  p.c = Eigen::VectorXd::Zero(N);
  if (with_gamma) p.c[0] = -1.0;  // maximize gamma

  PsdBlockMap q0;
  q0.size = s0;
  q0.fj.resize(N);
  for (int a = 0; a < s0; ++a)
    for (int b = a; b < s0; ++b) q0.fj[out.q0_var(a, b)].push_back({a, b, 1.0});
  p.blocks.push_back(std::move(q0));

  PsdBlockMap q1;
  q1.size = out.q1_size;
  q1.fj.resize(N);
  for (int a = 0; a < out.q1_size; ++a)
    for (int b = a; b < out.q1_size; ++b) q1.fj[out.q1_var(a, b)].push_back({a, b, 1.0});
  p.blocks.push_back(std::move(q1));

  p.neq = ball.size();
  p.b = Eigen::VectorXd::Zero(p.neq);
  for (const auto& [mono, coef] : target.terms()) p.b[ball.index_of(mono.exps)] += coef;
  if (with_gamma) p.eq.push_back({ball.index_of(Exponents(n, 0)), 0, 1.0});
  for (int a = 0; a < s0; ++a)
    for (int b = a; b < s0; ++b) {
      const double mult = (a == b) ? 1.0 : 2.0;
      p.eq.push_back({ball.index_of(add_exps(bk[a], bk[b])), out.q0_var(a, b), mult});
    }
  for (int pp = 0; pp < out.q1_size; ++pp)
    for (int qq = pp; qq < out.q1_size; ++qq) {
      const int i = pp / s1, a = pp % s1;
      const int j = qq / s1, b = qq % s1;
      const Polynomial& gij = g.at(i, j);
      if (gij.is_zero()) continue;
      const double mult = (pp == qq) ? 1.0 : 2.0;
      const Exponents ab = add_exps(bt[a], bt[b]);
      for (const auto& [mono, coef] : gij.terms())
        p.eq.push_back({ball.index_of(add_exps(ab, mono.exps)), out.q1_var(pp, qq),
                        mult * coef});
    }
  return out;
}

inline SosAssembly assemble_sos_relaxation(const Polynomial& f, const PolyMatrix& g, int k) {
  return assemble_gram_matching(f, g, k, true);
}

// Weighted-sum certificate that f - gamma lies in the order-2k truncation of
// the quadratic module of G.
struct QmCertificate {
  int k = 0;
  double gamma = 0.0;
  Eigen::MatrixXd q0;  // Gram over [x]_k
  Eigen::MatrixXd q1;  // block Gram over the (matrix row, [x]_{k-d_G}) index pairs
};

// polynomial reproduced by the certificate: gamma + <Q0, [x]_k [x]_k'> + <Q1, Z(x)>
inline Polynomial certificate_polynomial(const QmCertificate& cert, const PolyMatrix& g) {
  const int n = g.nvars();
  const int dg = degree_param(g);
  const MonomialBasis bk(n, cert.k);
  const MonomialBasis bt(n, cert.k - dg);
  const int s0 = bk.size();
  const int s1 = bt.size();
  if (cert.q0.rows() != s0 || cert.q1.rows() != g.size() * s1)
    throw std::invalid_argument("certificate_polynomial: Gram dimensions do not match k");
  Polynomial acc = Polynomial::constant(n, cert.gamma);
  for (int a = 0; a < s0; ++a)
    for (int b = a; b < s0; ++b) {
      const double w = (a == b ? 1.0 : 2.0) * cert.q0(a, b);
      if (w != 0.0) acc.add_term(add_exps(bk[a], bk[b]), w);
    }
  for (int pp = 0; pp < cert.q1.rows(); ++pp)
    for (int qq = pp; qq < cert.q1.rows(); ++qq) {
      const double w = (pp == qq ? 1.0 : 2.0) * cert.q1(pp, qq);
      if (w == 0.0) continue;
      const int i = pp / s1, a = pp % s1;
      const int j = qq / s1, b = qq % s1;
      const Exponents ab = add_exps(bt[a], bt[b]);
      for (const auto& [mono, coef] : g.at(i, j).terms())
        acc.add_term(add_exps(ab, mono.exps), w * coef);
    }
  return acc;
}

// max absolute coefficient of f - (reconstruction); independent of the solver
inline double certificate_residual(const Polynomial& f, const QmCertificate& cert,
                                   const PolyMatrix& g) {
  Polynomial diff = f - certificate_polynomial(cert, g);
  return diff.max_abs_coeff();
}

inline double min_eigenvalue(const Eigen::MatrixXd& a) {
  if (a.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

struct CertifyResult {
  std::optional<QmCertificate> certificate;
  SdpStatus solver_status = SdpStatus::NumericalTrouble;
  double residual = 0.0;
  std::string reason;

  bool certified() const { return certificate.has_value(); }
};

// Decide membership of f - gamma in the order-2k quadratic module by solving
// the Gram feasibility problem. A negative tol selects 1e-6*(1+max|coeff f|).
// Failure reports only that no certificate was found at this order.
inline CertifyResult certify_qm_membership(const Polynomial& f, double gamma,
                                           const PolyMatrix& g, int k, double tol = -1.0,
                                           const SolveOptions& opts = {}) {
  if (tol < 0.0) tol = 1e-6 * (1.0 + f.max_abs_coeff());
  CertifyResult out;
  Polynomial target = f - Polynomial::constant(f.nvars(), gamma);
  SosAssembly asm_ = assemble_gram_matching(target, g, k, false);
  SdpSolution sol = solve(asm_.problem, opts);
  out.solver_status = sol.status;
  if (sol.status != SdpStatus::Optimal) {
    out.reason = std::string("feasibility solve ended with status ") + to_string(sol.status);
    return out;
  }
  QmCertificate cert;
  cert.k = k;
  cert.gamma = gamma;
  cert.q0 = asm_.read_q0(sol.y);
  cert.q1 = asm_.read_q1(sol.y);
  const double psd_tol_q0 = 1e-8 * std::max(1.0, cert.q0.trace());
  const double psd_tol_q1 = 1e-8 * std::max(1.0, cert.q1.trace());
  if (min_eigenvalue(cert.q0) < -psd_tol_q0 || min_eigenvalue(cert.q1) < -psd_tol_q1) {
    out.reason = "Gram matrices failed the positive-semidefiniteness tolerance";
    return out;
  }
  out.residual = certificate_residual(f, cert, g);
  if (out.residual > tol) {
    out.reason = "reconstruction residual " + std::to_string(out.residual) +
                 " exceeds tolerance";
    return out;
  }
  out.certificate = std::move(cert);
  return out;
}

}  // namespace pmo
