#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include "pmo/sdp.hpp"
#include "pmo/svec.hpp"

namespace pmo {
namespace ipm_detail {

// Homogeneous self-dual embedding of the conic pair
//   min c'x  s.t.  Gx + s = h, Ax = b, s in product-of-PSD cone
// with Nesterov-Todd scaling and a Mehrotra predictor-corrector step.
// G columns are -svec(Fj) per block, h is svec(F0).
class HsdeSolver {
 public:
  HsdeSolver(const SdpProblem& p, const SolveOptions& opts) : p_(p), opts_(opts) {
    N_ = p.nvars;
    neq_ = p.neq;
    int off = 0;
    cones_.reserve(p.blocks.size());
    for (const auto& blk : p.blocks) {
      Cone cn;
      cn.m = blk.size;
      cn.d = svec_len(blk.size);
      cn.off = off;
      off += cn.d;
      cn.h = Eigen::VectorXd::Zero(cn.d);
      for (const auto& t : blk.f0)
        cn.h[svec_index(cn.m, t.row, t.col)] = (t.row == t.col ? t.val : rt2_ * t.val);
      cn.gcols.resize(N_);
      for (int j = 0; j < N_; ++j)
        for (const auto& t : blk.fj[j])
          cn.gcols[j].push_back({svec_index(cn.m, t.row, t.col),
                                 -(t.row == t.col ? t.val : rt2_ * t.val)});
      cones_.push_back(std::move(cn));
    }
    dtot_ = off;
    cone_rank_ = 0;
    for (const auto& cn : cones_) cone_rank_ += cn.m;
    bnorm_ = std::max(1.0, p_.b.size() ? p_.b.norm() : 0.0);
    Eigen::VectorXd hfull(dtot_);
    for (size_t bI = 0; bI < cones_.size(); ++bI)
      hfull.segment(cones_[bI].off, cones_[bI].d) = cones_[bI].h;
    h_ = hfull;
    hnorm_ = std::max(1.0, h_.norm());
    cnorm_ = std::max(1.0, p_.c.norm());

    // constant part of the reduced-system factorization: an orthonormal
    // split of variable space into range(A') and its complement
    if (neq_ > 0) {
      Eigen::MatrixXd at = Eigen::MatrixXd::Zero(N_, neq_);
      for (const auto& t : p_.eq) at(t.col, t.row) += t.val;
      Eigen::HouseholderQR<Eigen::MatrixXd> qa(at);
      Eigen::MatrixXd q = qa.householderQ();
      q1a_ = q.leftCols(neq_);
      q2a_ = q.rightCols(N_ - neq_);
      ra_ = qa.matrixQR().topRows(neq_).triangularView<Eigen::Upper>();
    } else {
      q2a_ = Eigen::MatrixXd::Identity(N_, N_);
    }
  }

  SdpSolution run() {
    SdpSolution out;
    if (!init_point(out)) return out;

    for (int it = 0; it < opts_.max_iter; ++it) {
      out.iterations = it;
      // residuals of the homogeneous model
      Eigen::VectorXd r_dual = AT_mul(y_) + GT_mul(z_) + p_.c * tau_;
      Eigen::VectorXd r_eq = A_mul(x_) - p_.b * tau_;
      Eigen::VectorXd r_pri = G_mul(x_) + s_ - h_ * tau_;
      const double r_gap = p_.c.dot(x_) + dot_b(y_) + h_.dot(z_) + kap_;

      const double pres = std::max(r_eq.norm() / tau_ / bnorm_,
                                   r_pri.norm() / tau_ / hnorm_);
      const double dres = r_dual.norm() / tau_ / cnorm_;
      const double gap = s_.dot(z_) / (tau_ * tau_);
      const double pcost = p_.c.dot(x_) / tau_;
      const double dcost = -(dot_b(y_) + h_.dot(z_)) / tau_;

      if (opts_.verbose)
        std::fprintf(stderr, "it %3d  pcost % .6e  dcost % .6e  pres %.2e  dres %.2e  gap %.2e\n",
                     it, pcost, dcost, pres, dres, gap);

      if (pres <= opts_.tol && dres <= opts_.tol && gap <= opts_.tol) {
        fill_point(out, pcost, dcost, pres, dres, gap);
        out.status = SdpStatus::Optimal;
        return out;
      }
      // primal infeasibility certificate: A'y + G'z = 0, z >= 0, b'y + h'z = -1
      const double omega = -(dot_b(y_) + h_.dot(z_));
      if (omega > 0.0) {
        const double cert_res = (AT_mul(y_) + GT_mul(z_)).norm() / cnorm_;
        if (cert_res / omega <= opts_.tol) {
          fill_infeasible(out, omega);
          return out;
        }
      }
      // dual infeasibility (primal unboundedness): Gx + s = 0, Ax = 0, c'x = -1
      const double rho = -p_.c.dot(x_);
      if (rho > 0.0) {
        const double ray_res = std::max(A_mul(x_).norm() / bnorm_,
                                        (G_mul(x_) + s_).norm() / hnorm_);
        if (ray_res / rho <= opts_.tol) {
          fill_unbounded(out, rho);
          return out;
        }
      }

      const double mu = (s_.dot(z_) + tau_ * kap_) / (cone_rank_ + 1);

      if (!compute_scalings()) {
        fill_point(out, pcost, dcost, pres, dres, gap);
        out.status = SdpStatus::NumericalTrouble;
        return out;
      }
      if (!factor_kkt()) {
        fill_point(out, pcost, dcost, pres, dres, gap);
        out.status = SdpStatus::NumericalTrouble;
        return out;
      }

      // u1 solves the system with the (c, b, h) right-hand side; reused for both steps
      Eigen::VectorXd u1x, u1y, u1z;
      k3_solve(-p_.c, p_.b, h_, u1x, u1y, u1z);
      const double dt_den = p_.c.dot(u1x) + dot_b(u1y) + h_.dot(u1z) - kap_ / tau_;
      if (!std::isfinite(dt_den) || std::abs(dt_den) < 1e-300) {
        fill_point(out, pcost, dcost, pres, dres, gap);
        out.status = SdpStatus::NumericalTrouble;
        return out;
      }

      // affine (predictor) step: aim at zero residuals and zero complementarity
      Eigen::VectorXd lam_div_aff(dtot_);  // lambda \ t_comp with t_comp = -lambda o lambda
      for (const auto& cn : cones_)
        lam_div_aff.segment(cn.off, cn.d) = -svec_diag(cn.lambda);
      Eigen::VectorXd dx, dy, dz, ds;
      double dtau, dkap;
      solve_direction(-r_dual, -r_eq, -r_pri, -r_gap, lam_div_aff, -tau_ * kap_,
                      u1x, u1y, u1z, dt_den, dx, dy, dz, ds, dtau, dkap);
      const double a_aff = max_step(dz, ds, dtau, dkap);

      const double sigma_base = 1.0 - std::min(1.0, a_aff);
      const double sigma = sigma_base * sigma_base * sigma_base;

      // corrector target: sigma*mu*I - lambda^2 - symmetrized product of the
      // scaled affine directions
      Eigen::VectorXd lam_div_cmb(dtot_);
      for (const auto& cn : cones_) {
        Eigen::MatrixXd Dz = smat(W_apply(cn, dz.segment(cn.off, cn.d)), cn.m);
        Eigen::MatrixXd Ds = smat(Wti_apply(cn, ds.segment(cn.off, cn.d)), cn.m);
        Eigen::MatrixXd T = -0.5 * (Ds * Dz + Dz * Ds);
        T.diagonal().array() += sigma * mu;
        T.diagonal().array() -= cn.lambda.array().square();
        // invert the Jordan product with diag(lambda)
        for (int i = 0; i < cn.m; ++i)
          for (int j = 0; j < cn.m; ++j) T(i, j) *= 2.0 / (cn.lambda[i] + cn.lambda[j]);
        lam_div_cmb.segment(cn.off, cn.d) = svec(T);
      }
      const double t_taukap = sigma * mu - tau_ * kap_ - dtau * dkap;
      const double c1 = 1.0 - sigma;
      solve_direction(-c1 * r_dual, -c1 * r_eq, -c1 * r_pri, -c1 * r_gap, lam_div_cmb,
                      t_taukap, u1x, u1y, u1z, dt_den, dx, dy, dz, ds, dtau, dkap);

      double a_bound = max_step(dz, ds, dtau, dkap);
      double alpha = std::min(1.0, 0.99 * a_bound);
      if (!std::isfinite(alpha) || alpha < 1e-12) {
        fill_point(out, pcost, dcost, pres, dres, gap);
        out.status = SdpStatus::NumericalTrouble;
        return out;
      }

      x_ += alpha * dx;
      y_ += alpha * dy;
      z_ += alpha * dz;
      s_ += alpha * ds;
      tau_ += alpha * dtau;
      kap_ += alpha * dkap;
      if (!std::isfinite(x_.sum()) || !std::isfinite(s_.sum()) || !std::isfinite(z_.sum()) ||
          tau_ <= 0.0 || kap_ <= 0.0) {
        fill_point(out, pcost, dcost, pres, dres, gap);
        out.status = SdpStatus::NumericalTrouble;
        return out;
      }
    }
    // ran out of iterations: report the current normalized point
    Eigen::VectorXd r_eq = A_mul(x_) - p_.b * tau_;
    Eigen::VectorXd r_dual = AT_mul(y_) + GT_mul(z_) + p_.c * tau_;
    const double pres = std::max(r_eq.norm() / tau_ / bnorm_,
                                 (G_mul(x_) + s_ - h_ * tau_).norm() / tau_ / hnorm_);
    const double dres = r_dual.norm() / tau_ / cnorm_;
    const double gap = s_.dot(z_) / (tau_ * tau_);
    fill_point(out, p_.c.dot(x_) / tau_, -(dot_b(y_) + h_.dot(z_)) / tau_, pres, dres, gap);
    out.status = SdpStatus::MaxIter;
    out.iterations = opts_.max_iter;
    return out;
  }

 private:
  struct Cone {
    int m = 0, d = 0, off = 0;
    Eigen::VectorXd h;
    // svec-coordinate sparse columns of G restricted to this block
    std::vector<std::vector<std::pair<int, double>>> gcols;
    // NT scaling state
    Eigen::MatrixXd R, Rti, PP;
    Eigen::VectorXd lambda;
  };

  static Eigen::VectorXd svec_diag(const Eigen::VectorXd& lam) {
    const int m = static_cast<int>(lam.size());
    Eigen::VectorXd v = Eigen::VectorXd::Zero(svec_len(m));
    for (int i = 0; i < m; ++i) v[svec_index(m, i, i)] = lam[i];
    return v;
  }

  double dot_b(const Eigen::VectorXd& y) const { return neq_ ? p_.b.dot(y) : 0.0; }

  Eigen::VectorXd G_mul(const Eigen::VectorXd& x) const {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(dtot_);
    for (const auto& cn : cones_)
      for (int j = 0; j < N_; ++j) {
        const double xj = x[j];
        if (xj == 0.0) continue;
        for (const auto& [idx, val] : cn.gcols[j]) r[cn.off + idx] += val * xj;
      }
    return r;
  }

  Eigen::VectorXd GT_mul(const Eigen::VectorXd& zc) const {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(N_);
    for (const auto& cn : cones_)
      for (int j = 0; j < N_; ++j) {
        double acc = 0.0;
        for (const auto& [idx, val] : cn.gcols[j]) acc += val * zc[cn.off + idx];
        r[j] += acc;
      }
    return r;
  }

  Eigen::VectorXd A_mul(const Eigen::VectorXd& x) const {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(neq_);
    for (const auto& t : p_.eq) r[t.row] += t.val * x[t.col];
    return r;
  }

  Eigen::VectorXd AT_mul(const Eigen::VectorXd& y) const {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(N_);
    if (neq_)
      for (const auto& t : p_.eq) r[t.col] += t.val * y[t.row];
    return r;
  }

  // scaled-coordinate maps: W(u) = svec(R' smat(u) R), W^{-T}(u) = svec(R^{-1} smat(u) R^{-T})
  Eigen::VectorXd W_apply(const Cone& cn, const Eigen::VectorXd& u) const {
    return svec(cn.R.transpose() * smat(u, cn.m) * cn.R);
  }
  Eigen::VectorXd Wti_apply(const Cone& cn, const Eigen::VectorXd& u) const {
    return svec(cn.Rti.transpose() * smat(u, cn.m) * cn.Rti);
  }
  Eigen::VectorXd WT_apply(const Cone& cn, const Eigen::VectorXd& u) const {
    return svec(cn.R * smat(u, cn.m) * cn.R.transpose());
  }
  Eigen::VectorXd Winv_apply(const Cone& cn, const Eigen::VectorXd& u) const {
    return svec(cn.Rti * smat(u, cn.m) * cn.Rti.transpose());
  }
  Eigen::VectorXd H_apply(const Cone& cn, const Eigen::VectorXd& u) const {
    return svec(cn.PP * smat(u, cn.m) * cn.PP);
  }

  bool compute_scalings() {
    for (auto& cn : cones_) {
      Eigen::MatrixXd S = smat(s_.segment(cn.off, cn.d), cn.m);
      Eigen::MatrixXd Z = smat(z_.segment(cn.off, cn.d), cn.m);
      Eigen::LLT<Eigen::MatrixXd> ls(S), lz(Z);
      if (ls.info() != Eigen::Success || lz.info() != Eigen::Success) return false;
      Eigen::MatrixXd Ls = ls.matrixL();
      Eigen::MatrixXd Lz = lz.matrixL();
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(Lz.transpose() * Ls,
                                            Eigen::ComputeFullU | Eigen::ComputeFullV);
      cn.lambda = svd.singularValues();
      if (cn.lambda.minCoeff() <= 0.0) return false;
      Eigen::VectorXd isq = cn.lambda.cwiseSqrt().cwiseInverse();
      cn.R = Ls * svd.matrixV() * isq.asDiagonal();
      cn.Rti = Lz * svd.matrixU() * isq.asDiagonal();
      cn.PP = cn.R * cn.R.transpose();
    }
    return true;
  }

  // identity scaling for the initial point
  void identity_scalings() {
    for (auto& cn : cones_) {
      cn.R = Eigen::MatrixXd::Identity(cn.m, cn.m);
      cn.Rti = cn.R;
      cn.PP = cn.R;
      cn.lambda = Eigen::VectorXd::Ones(cn.m);
    }
  }

  // refresh the scaled coefficient matrix Gt = W^{-T} G and the QR factor of
  // its restriction to the nullspace of A; never forms G' H^{-1} G, which
  // would square the conditioning of the scaling
  bool factor_kkt() {
    Gt_.resize(dtot_, N_);
    Gt_.setZero();
    for (const auto& cn : cones_) {
      Eigen::MatrixXd t(cn.m, cn.m);
      for (int j = 0; j < N_; ++j) {
        if (cn.gcols[j].empty()) continue;
        t.setZero();
        for (const auto& [idx, val] : cn.gcols[j]) {
          const auto [r, cIdx] = svec_rowcol(cn.m, idx);
          const double w = (r == cIdx) ? val : val / rt2_;
          t.noalias() += w * (cn.Rti.row(r).transpose() * cn.Rti.row(cIdx));
          if (r != cIdx) t.noalias() += w * (cn.Rti.row(cIdx).transpose() * cn.Rti.row(r));
        }
        Gt_.col(j).segment(cn.off, cn.d) = svec(t);
      }
    }
    if (!Gt_.allFinite()) return false;
    qrB_.compute(Gt_ * q2a_);
    return true;
  }

  static std::pair<int, int> svec_rowcol(int m, int idx) {
    // inverse of svec_index for row-major upper triangle
    int i = 0, base = 0;
    while (idx >= base + (m - i)) {
      base += m - i;
      ++i;
    }
    return {i, i + (idx - base)};
  }

  // solve the reduced 3x3 system
  //   A' uy + G' uz = rx,  A ux = ry,  G ux - H uz = rz
  // with refinement at this level: the Schur-complement elimination loses
  // accuracy through H^{-1} when the scaling is ill-conditioned near the
  // optimum, and correcting against the full system recovers it
  void k3_solve(const Eigen::VectorXd& rx, const Eigen::VectorXd& ry, const Eigen::VectorXd& rz,
                Eigen::VectorXd& ux, Eigen::VectorXd& uy, Eigen::VectorXd& uz) const {
    k3_solve_once(rx, ry, rz, ux, uy, uz);
    const double scale = std::max({1.0, rx.norm(), ry.norm(), rz.norm()});
    for (int pass = 0; pass < 3; ++pass) {
      Eigen::VectorXd ex = rx - AT_mul(uy) - GT_mul(uz);
      Eigen::VectorXd ey = ry - A_mul(ux);
      Eigen::VectorXd ez = rz - G_mul(ux);
      for (const auto& cn : cones_)
        ez.segment(cn.off, cn.d) += H_apply(cn, uz.segment(cn.off, cn.d));
      if (std::max({ex.norm(), ey.norm(), ez.norm()}) <= 1e-14 * scale) break;
      Eigen::VectorXd cx, cy, cz;
      k3_solve_once(ex, ey, ez, cx, cy, cz);
      ux += cx;
      uy += cy;
      uz += cz;
    }
  }

  // substitute w = W uz and split ux over range(A') + nullspace(A):
  //   ux = Q1 v1 + Q2 v2,  Ra v1 = ry (via Ra' on the A-row),
  //   (Gt Q2)'(Gt Q2) v2 = Q2' rx + (Gt Q2)'(rzt - Gt Q1 v1)
  // where the seminormal system is solved through the QR factor of Gt Q2
  void k3_solve_once(const Eigen::VectorXd& rx, const Eigen::VectorXd& ry,
                     const Eigen::VectorXd& rz, Eigen::VectorXd& ux, Eigen::VectorXd& uy,
                     Eigen::VectorXd& uz) const {
    Eigen::VectorXd rzt(dtot_);
    for (const auto& cn : cones_)
      rzt.segment(cn.off, cn.d) = Wti_apply(cn, rz.segment(cn.off, cn.d));
    Eigen::VectorXd v1;
    Eigen::VectorXd xpart = Eigen::VectorXd::Zero(N_);
    if (neq_ > 0) {
      v1 = ra_.transpose().triangularView<Eigen::Lower>().solve(ry);
      xpart.noalias() = q1a_ * v1;
    }
    const int nv2 = N_ - neq_;
    ux = xpart;
    if (nv2 > 0) {
      Eigen::VectorXd g = rzt - Gt_ * xpart;
      Eigen::VectorXd c2 = q2a_.transpose() * rx;
      Eigen::VectorXd t1 = qrB_.matrixQR()
                               .topRows(nv2)
                               .transpose()
                               .triangularView<Eigen::Lower>()
                               .solve(c2);
      Eigen::VectorXd qtg = (qrB_.householderQ().transpose() * g).head(nv2);
      Eigen::VectorXd v2 = qrB_.matrixQR().topRows(nv2).triangularView<Eigen::Upper>().solve(
          (t1 + qtg).eval());
      ux.noalias() += q2a_ * v2;
    }
    Eigen::VectorXd wt = Gt_ * ux - rzt;
    uz.resize(dtot_);
    for (const auto& cn : cones_)
      uz.segment(cn.off, cn.d) = Winv_apply(cn, wt.segment(cn.off, cn.d));
    if (neq_ > 0) {
      Eigen::VectorXd rhs1 = q1a_.transpose() * (rx - Gt_.transpose() * wt);
      uy = ra_.triangularView<Eigen::Upper>().solve(rhs1);
    } else {
      uy.resize(0);
    }
  }

  // assemble a full direction from targets; lam_div holds lambda \ t_comp per block
  void solve_direction(const Eigen::VectorXd& t_dual, const Eigen::VectorXd& t_eq,
                       const Eigen::VectorXd& t_pri, double t_gap,
                       const Eigen::VectorXd& lam_div, double t_taukap,
                       const Eigen::VectorXd& u1x, const Eigen::VectorXd& u1y,
                       const Eigen::VectorXd& u1z, double dt_den, Eigen::VectorXd& dx,
                       Eigen::VectorXd& dy, Eigen::VectorXd& dz, Eigen::VectorXd& ds,
                       double& dtau, double& dkap) const {
    Eigen::VectorXd t_pri_red = t_pri;
    for (const auto& cn : cones_)
      t_pri_red.segment(cn.off, cn.d) -= WT_apply(cn, lam_div.segment(cn.off, cn.d));
    Eigen::VectorXd u2x, u2y, u2z;
    k3_solve(t_dual, t_eq, t_pri_red, u2x, u2y, u2z);
    dtau = (t_gap - t_taukap / tau_ - (p_.c.dot(u2x) + dot_b(u2y) + h_.dot(u2z))) / dt_den;
    dx = u2x + dtau * u1x;
    dy = u2y + dtau * u1y;
    dz = u2z + dtau * u1z;
    ds = t_pri + h_ * dtau - G_mul(dx);
    dkap = (t_taukap - kap_ * dtau) / tau_;
  }

  // largest step keeping s, z in the cone and tau, kappa positive
  double max_step(const Eigen::VectorXd& dz, const Eigen::VectorXd& ds, double dtau,
                  double dkap) const {
    double bound = std::numeric_limits<double>::infinity();
    for (const auto& cn : cones_) {
      Eigen::VectorXd ilam = cn.lambda.cwiseSqrt().cwiseInverse();
      Eigen::MatrixXd Dz = smat(W_apply(cn, dz.segment(cn.off, cn.d)), cn.m);
      Eigen::MatrixXd Ds = smat(Wti_apply(cn, ds.segment(cn.off, cn.d)), cn.m);
      Eigen::MatrixXd Nz = ilam.asDiagonal() * Dz * ilam.asDiagonal();
      Eigen::MatrixXd Ns = ilam.asDiagonal() * Ds * ilam.asDiagonal();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ez(Nz, Eigen::EigenvaluesOnly);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Ns, Eigen::EigenvaluesOnly);
      const double mz = ez.eigenvalues().minCoeff();
      const double ms = es.eigenvalues().minCoeff();
      if (mz < 0.0) bound = std::min(bound, -1.0 / mz);
      if (ms < 0.0) bound = std::min(bound, -1.0 / ms);
    }
    if (dtau < 0.0) bound = std::min(bound, -tau_ / dtau);
    if (dkap < 0.0) bound = std::min(bound, -kap_ / dkap);
    return bound;
  }

  bool init_point(SdpSolution& out) {
    identity_scalings();
    if (!factor_kkt()) {
      out.status = SdpStatus::NumericalTrouble;
      return false;
    }
    // primal start: min-norm s with Gx + s = h, Ax = b
    Eigen::VectorXd px, py, pz;
    k3_solve(Eigen::VectorXd::Zero(N_), p_.b, h_, px, py, pz);
    x_ = px;
    s_ = -pz;
    shift_into_cone(s_);
    // dual start: min-norm z with A'y + G'z = -c
    Eigen::VectorXd qx, qy, qz;
    k3_solve(-p_.c, Eigen::VectorXd::Zero(neq_), Eigen::VectorXd::Zero(dtot_), qx, qy, qz);
    y_ = qy;
    z_ = qz;
    shift_into_cone(z_);
    tau_ = 1.0;
    kap_ = 1.0;
    if (!std::isfinite(x_.sum()) || !std::isfinite(s_.sum()) || !std::isfinite(z_.sum()) ||
        !std::isfinite(y_.sum())) {
      out.status = SdpStatus::NumericalTrouble;
      return false;
    }
    return true;
  }

  void shift_into_cone(Eigen::VectorXd& v) const {
    double lam_min = std::numeric_limits<double>::infinity();
    for (const auto& cn : cones_) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(smat(v.segment(cn.off, cn.d), cn.m),
                                                        Eigen::EigenvaluesOnly);
      lam_min = std::min(lam_min, es.eigenvalues().minCoeff());
    }
    if (lam_min < 1e-8 * std::max(1.0, v.norm())) {
      const double a = 1.0 + std::max(0.0, -lam_min);
      for (const auto& cn : cones_)
        for (int i = 0; i < cn.m; ++i) v[cn.off + svec_index(cn.m, i, i)] += a;
    }
  }

  void fill_point(SdpSolution& out, double pcost, double dcost, double pres, double dres,
                  double gap) const {
    out.y = x_ / tau_;
    out.eq_duals = y_ / tau_;
    out.block_duals.clear();
    for (const auto& cn : cones_)
      out.block_duals.push_back(smat(z_.segment(cn.off, cn.d), cn.m) / tau_);
    out.pcost = pcost;
    out.dcost = dcost;
    out.primal_residual = pres;
    out.dual_residual = dres;
    out.gap = gap;
  }

  void fill_infeasible(SdpSolution& out, double omega) {
    out.status = SdpStatus::Infeasible;
    out.y = Eigen::VectorXd::Zero(N_);
    out.eq_duals = y_ / omega;
    out.block_duals.clear();
    for (const auto& cn : cones_)
      out.block_duals.push_back(smat(z_.segment(cn.off, cn.d), cn.m) / omega);
    out.pcost = std::numeric_limits<double>::quiet_NaN();
    out.dcost = std::numeric_limits<double>::quiet_NaN();
    out.primal_residual = (AT_mul(y_) + GT_mul(z_)).norm() / omega;
    out.dual_residual = out.primal_residual;
    out.gap = std::numeric_limits<double>::quiet_NaN();
  }

  void fill_unbounded(SdpSolution& out, double rho) {
    out.status = SdpStatus::Unbounded;
    out.y = x_ / rho;  // improving ray
    out.eq_duals = Eigen::VectorXd::Zero(neq_);
    out.block_duals.assign(cones_.size(), Eigen::MatrixXd());
    out.pcost = std::numeric_limits<double>::quiet_NaN();
    out.dcost = std::numeric_limits<double>::quiet_NaN();
    out.primal_residual = (G_mul(x_) + s_).norm() / rho;
    out.dual_residual = std::numeric_limits<double>::quiet_NaN();
    out.gap = std::numeric_limits<double>::quiet_NaN();
  }

  static constexpr double rt2_ = 1.4142135623730951;

  const SdpProblem& p_;
  SolveOptions opts_;
  int N_ = 0, neq_ = 0, dtot_ = 0, cone_rank_ = 0;
  std::vector<Cone> cones_;
  Eigen::VectorXd h_;
  double bnorm_ = 1.0, hnorm_ = 1.0, cnorm_ = 1.0;

  Eigen::VectorXd x_, y_, z_, s_;
  double tau_ = 1.0, kap_ = 1.0;
  Eigen::MatrixXd q1a_, q2a_, ra_;  // constant split of variable space along A'
  Eigen::MatrixXd Gt_;              // per-iteration scaled coefficients W^{-T} G
  Eigen::HouseholderQR<Eigen::MatrixXd> qrB_;
};

}  // namespace ipm_detail

inline SdpSolution solve(const SdpProblem& p, const SolveOptions& opts = {}) {
  p.validate();
  if (opts.backend) return opts.backend->solve(p, opts);
  if (p.nvars > 5000)
    throw std::invalid_argument("solve: built-in solver supports at most 5000 variables");
  for (const auto& blk : p.blocks)
    if (blk.size > 200)
      throw std::invalid_argument("solve: built-in solver supports block dimension <= 200");
  ipm_detail::HsdeSolver solver(p, opts);
  return solver.run();
}

}  // namespace pmo
