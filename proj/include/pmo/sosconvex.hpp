#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pmo/hierarchy.hpp"

namespace pmo {

// searches a PSD Gram Q with target = b(z)' Q b(z) over a fixed monomial
// list; every monomial reachable from a basis pair is constrained, so a
// feasible Q reconstructs the target exactly up to solver tolerance
struct GramSearch {
  bool found = false;
  Eigen::MatrixXd gram;
  SdpStatus status = SdpStatus::NumericalTrouble;
  std::string note;
};

inline GramSearch sos_gram_over_basis(const Polynomial& target,
                                      const std::vector<Exponents>& basis,
                                      const SolveOptions& opts = {}) {
  GramSearch out;
  const int s = static_cast<int>(basis.size());
  if (s == 0) {
    out.found = target.terms().empty();
    out.gram.resize(0, 0);
    out.status = out.found ? SdpStatus::Optimal : SdpStatus::Infeasible;
    if (!out.found) out.note = "nonzero target with an empty basis";
    return out;
  }

  std::map<Monomial, int, GradedLexLess> rows;
  for (int p = 0; p < s; ++p)
    for (int q = p; q < s; ++q)
      rows.emplace(Monomial(add_exps(basis[p], basis[q])), 0);
  for (const auto& [mono, coeff] : target.terms())
    if (!rows.count(mono)) {
      out.status = SdpStatus::Infeasible;
      out.note = "target monomial outside the span of basis products";
      return out;
    }
  int nrow = 0;
  for (auto& [mono, idx] : rows) idx = nrow++;

  SdpProblem prob;
  prob.nvars = svec_len(s);
  prob.c = Eigen::VectorXd::Zero(prob.nvars);
  PsdBlockMap blk;
  blk.size = s;
  blk.fj.assign(prob.nvars, {});
  prob.neq = nrow;
  prob.b = Eigen::VectorXd::Zero(nrow);
  for (const auto& [mono, coeff] : target.terms()) prob.b[rows.at(mono)] = coeff;
  for (int p = 0; p < s; ++p)
    for (int q = p; q < s; ++q) {
      const int var = svec_index(s, p, q);
      blk.fj[var].push_back({p, q, 1.0});
      const int row = rows.at(Monomial(add_exps(basis[p], basis[q])));
      prob.eq.push_back({row, var, p == q ? 1.0 : 2.0});
    }
  prob.blocks.push_back(std::move(blk));

  SdpSolution sol = solve(prob, opts);
  out.status = sol.status;
  if (sol.status != SdpStatus::Optimal) {
    out.note = std::string("gram search not solved: ") + to_string(sol.status);
    return out;
  }
  Eigen::MatrixXd q(s, s);
  for (int p = 0; p < s; ++p)
    for (int qq = p; qq < s; ++qq) q(p, qq) = q(qq, p) = sol.y[svec_index(s, p, qq)];
  const double eig = min_eigenvalue(q);
  if (eig < -1e-8 * std::max(1.0, q.trace())) {
    out.note = "recovered Gram is not numerically PSD";
    return out;
  }
  out.found = true;
  out.gram = q;
  return out;
}

struct SosConvexity {
  bool certified = false;
  Eigen::MatrixXd gram;        // witness Gram when certified
  int direction_power = 0;     // power s of the ||xi||^(2s) factor that closed
  SdpStatus status = SdpStatus::Optimal;
  std::string note;
};

// f is SOS-convex when h' grad^2 f(x) h is a sum of squares in (x, h); the
// Gram is indexed by pairs (unit direction, monomial of degree <= deg(f)/2 - 1)
inline SosConvexity is_sos_convex_poly(const Polynomial& f, const SolveOptions& opts = {}) {
  SosConvexity out;
  const int n = f.nvars();
  const int deg = f.degree();
  if (deg <= 1) {
    out.certified = true;
    out.note = "Hessian is identically zero";
    return out;
  }
  if (deg % 2 != 0) {
    out.note = "odd degree, the top Hessian form cannot be a sum of squares";
    out.status = SdpStatus::Infeasible;
    return out;
  }

  // ring layout: vars 0..n-1 = x, vars n..2n-1 = directions h
  const int big = 2 * n;
  Polynomial form(big);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      const Polynomial hab = f.partial(a).partial(b);
      const double mult = (a == b) ? 1.0 : 2.0;
      for (const auto& [mono, coeff] : hab.terms()) {
        Exponents e(big, 0);
        for (int i = 0; i < n; ++i) e[i] = mono.exps[i];
        e[n + a] += 1;
        e[n + b] += 1;
        form.add_term(e, mult * coeff);
      }
    }

  MonomialBasis xb(n, deg / 2 - 1);
  std::vector<Exponents> basis;
  basis.reserve(static_cast<std::size_t>(n) * xb.size());
  for (int a = 0; a < n; ++a)
    for (int bx = 0; bx < xb.size(); ++bx) {
      Exponents e(big, 0);
      for (int i = 0; i < n; ++i) e[i] = xb[bx][i];
      e[n + a] = 1;
      basis.push_back(std::move(e));
    }

  GramSearch gs = sos_gram_over_basis(form, basis, opts);
  out.certified = gs.found;
  out.gram = gs.gram;
  out.status = gs.status;
  out.note = gs.found ? "" : gs.note;
  return out;
}

// sufficient test that -G is SOS-convex: -h' (d^2/dx^2)(xi' G(x) xi) h, a
// polynomial quadratic in both xi and h, must be a sum of squares.  Some
// certifiably convex instances need the harmless factor ||xi||^(2s) before a
// Gram exists, so powers s = 0, 1, 2 are tried in turn.  A FALSE answer is
// inconclusive: the condition is sufficient, not necessary.
inline SosConvexity is_sos_convex_negG(const PolyMatrix& g, const SolveOptions& opts = {}) {
  SosConvexity out;
  const int n = g.nvars();
  const int m = g.size();
  int degg = 0;
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) degg = std::max(degg, g.at(i, j).degree());
  if (degg <= 1) {
    out.certified = true;
    out.note = "entries are affine, the direction Hessian is identically zero";
    return out;
  }

  // ring layout: vars 0..n-1 = x, n..n+m-1 = xi, n+m..n+m+n-1 = h
  const int big = n + m + n;
  Polynomial form(big);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      const double mij = (i == j) ? 1.0 : 2.0;
      for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
          const double mab = (a == b) ? 1.0 : 2.0;
          const Polynomial hab = g.at(i, j).partial(a).partial(b);
          for (const auto& [mono, coeff] : hab.terms()) {
            Exponents e(big, 0);
            for (int t = 0; t < n; ++t) e[t] = mono.exps[t];
            e[n + i] += 1;
            e[n + j] += 1;
            e[n + m + a] += 1;
            e[n + m + b] += 1;
            form.add_term(e, -mij * mab * coeff);
          }
        }
    }

  Polynomial xi_norm2(big);
  for (int i = 0; i < m; ++i) {
    Exponents e(big, 0);
    e[n + i] = 2;
    xi_norm2.add_term(e, 1.0);
  }

  const int dx = (degg - 1) / 2;
  MonomialBasis xb(n, dx);
  Polynomial target = form;
  for (int s = 0; s <= 2; ++s) {
    if (s > 0) target = target * xi_norm2;
    // basis monomials x^beta xi^gamma h_a with |gamma| = s + 1 exactly
    std::vector<Exponents> basis;
    MonomialBasis xib(m, s + 1);
    for (int bx = 0; bx < xb.size(); ++bx)
      for (int gi = 0; gi < xib.size(); ++gi) {
        if (degree_of(xib[gi]) != s + 1) continue;
        for (int a = 0; a < n; ++a) {
          Exponents e(big, 0);
          for (int t = 0; t < n; ++t) e[t] = xb[bx][t];
          for (int t = 0; t < m; ++t) e[n + t] = xib[gi][t];
          e[n + m + a] = 1;
          basis.push_back(std::move(e));
        }
      }
    GramSearch gs = sos_gram_over_basis(target, basis, opts);
    if (gs.found) {
      out.certified = true;
      out.gram = gs.gram;
      out.direction_power = s;
      out.status = gs.status;
      out.note.clear();
      return out;
    }
    out.status = gs.status;
    out.note = gs.note;
  }
  out.note = "not certified: no Gram found with direction factors up to ||xi||^4; "
             "the test is sufficient only, so this is inconclusive";
  return out;
}

struct ConvexSolve {
  int d = 0;              // relaxation order used
  double value = 0.0;     // moment bound, exact under the convexity certificates
  Eigen::VectorXd minimizer;
  double feas_min_eig = 0.0;  // smallest eigenvalue of G at the minimizer
  double jensen_gap = 0.0;    // f(minimizer) - value, <= tolerance when exact
  OrderResult order;

  explicit ConvexSolve(OrderResult o) : order(std::move(o)) {}
};

// single-shot solve at the lowest meaningful order; valid when f and -G both
// carry SOS-convexity certificates, in which case the bound is exact and the
// degree-one moments are a minimizer
inline ConvexSolve solve_convex(const Polynomial& f, const PolyMatrix& g,
                                const SolveOptions& opts = {}) {
  if (f.nvars() != g.nvars())
    throw std::invalid_argument("solve_convex: variable count mismatch");
  const int n = f.nvars();
  const int d = std::max({(f.degree() + 1) / 2, degree_param(g), 1});

  ConvexSolve out(solve_order(f, g, d, opts));
  out.d = d;
  if (out.order.status != SdpStatus::Optimal)
    throw std::runtime_error(std::string("solve_convex: relaxation not solved: ") +
                             to_string(out.order.status));
  out.value = out.order.mom_value;
  out.minimizer.resize(n);
  for (int i = 0; i < n; ++i) {
    Exponents e(n, 0);
    e[i] = 1;
    out.minimizer[i] = out.order.moments.value(e);
  }
  out.feas_min_eig = min_eigenvalue(g.eval(out.minimizer));
  if (out.feas_min_eig < -1e-6)
    throw std::runtime_error(
        "solve_convex: degree-one moments are infeasible; the instance does not "
        "satisfy the convexity preconditions");
  out.jensen_gap = f.eval(out.minimizer) - out.value;
  if (out.jensen_gap > 1e-6)
    throw std::runtime_error(
        "solve_convex: minimizer value exceeds the bound; the instance does not "
        "satisfy the convexity preconditions");
  return out;
}

}  // namespace pmo
