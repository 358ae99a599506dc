#pragma once

#include <Eigen/Core>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace pmo {

// entry of a symmetric matrix, stored once with row <= col
struct SymTriplet {
  int row = 0, col = 0;
  double val = 0.0;
};

// one PSD constraint: y -> F0 + sum_j y_j Fj must be PSD
struct PsdBlockMap {
  int size = 0;
  std::vector<SymTriplet> f0;
  std::vector<std::vector<SymTriplet>> fj;  // indexed by variable
};

struct EqTriplet {
  int row = 0, col = 0;
  double val = 0.0;
};

// min c'y  s.t.  F0_b + sum_j y_j Fj_b >= 0 for every block b,  A y = b
struct SdpProblem {
  int nvars = 0;
  Eigen::VectorXd c;
  std::vector<PsdBlockMap> blocks;
  int neq = 0;
  std::vector<EqTriplet> eq;
  Eigen::VectorXd b;

  void validate() const {
    if (nvars < 0) throw std::invalid_argument("SdpProblem: negative nvars");
    if (c.size() != nvars) throw std::invalid_argument("SdpProblem: objective length");
    if (blocks.empty()) throw std::invalid_argument("SdpProblem: no PSD blocks");
    for (const auto& blk : blocks) {
      if (blk.size <= 0) throw std::invalid_argument("SdpProblem: block size");
      if (static_cast<int>(blk.fj.size()) != nvars)
        throw std::invalid_argument("SdpProblem: per-variable map length");
      auto check_tri = [&](const SymTriplet& t) {
        if (t.row < 0 || t.col < t.row || t.col >= blk.size)
          throw std::invalid_argument("SdpProblem: triplet index out of range");
      };
      for (const auto& t : blk.f0) check_tri(t);
      for (const auto& col : blk.fj)
        for (const auto& t : col) check_tri(t);
    }
    if (b.size() != neq) throw std::invalid_argument("SdpProblem: rhs length");
    for (const auto& t : eq)
      if (t.row < 0 || t.row >= neq || t.col < 0 || t.col >= nvars)
        throw std::invalid_argument("SdpProblem: equality triplet out of range");
  }
};

enum class SdpStatus { Optimal, Infeasible, Unbounded, MaxIter, NumericalTrouble };

inline const char* to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::Optimal: return "Optimal";
    case SdpStatus::Infeasible: return "Infeasible";
    case SdpStatus::Unbounded: return "Unbounded";
    case SdpStatus::MaxIter: return "MaxIter";
    case SdpStatus::NumericalTrouble: return "NumericalTrouble";
  }
  return "Unknown";
}

struct SdpSolution {
  SdpStatus status = SdpStatus::NumericalTrouble;
  Eigen::VectorXd y;                         // primal variables
  std::vector<Eigen::MatrixXd> block_duals;  // PSD multiplier per block
  Eigen::VectorXd eq_duals;
  double pcost = 0.0, dcost = 0.0;
  double primal_residual = 0.0, dual_residual = 0.0, gap = 0.0;
  int iterations = 0;
};

struct SolveOptions;

class SdpBackend {
 public:
  virtual ~SdpBackend() = default;
  virtual std::string name() const = 0;
  virtual SdpSolution solve(const SdpProblem& p, const SolveOptions& opts) const = 0;
};

struct SolveOptions {
  double tol = 1e-8;
  int max_iter = 200;
  unsigned seed = 0;  // consumed by callers that randomize (the solver itself is deterministic)
  bool verbose = false;
  std::shared_ptr<const SdpBackend> backend;  // null selects the built-in solver
};

SdpSolution solve(const SdpProblem& p, const SolveOptions& opts);

}  // namespace pmo
