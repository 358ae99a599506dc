#pragma once

#include <unistd.h>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "pmo/sdp.hpp"

namespace pmo {

// offline-solving schema: the conic problem with its affine PSD maps as
// sparse triplets, self-describing enough to reconstruct bit-for-bit
inline nlohmann::json sdp_problem_to_json(const SdpProblem& p) {
  nlohmann::json j;
  j["vars"] = p.nvars;
  j["objective"] = std::vector<double>(p.c.data(), p.c.data() + p.c.size());
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& blk : p.blocks) {
    nlohmann::json jb;
    jb["size"] = blk.size;
    nlohmann::json f0 = nlohmann::json::array();
    for (const auto& t : blk.f0) f0.push_back({t.row, t.col, t.val});
    jb["F0"] = std::move(f0);
    nlohmann::json fj = nlohmann::json::array();
    for (int var = 0; var < static_cast<int>(blk.fj.size()); ++var)
      for (const auto& t : blk.fj[var]) fj.push_back({var, t.row, t.col, t.val});
    jb["Fj"] = std::move(fj);
    blocks.push_back(std::move(jb));
  }
  j["psd_blocks"] = std::move(blocks);
  nlohmann::json a = nlohmann::json::array();
  for (const auto& t : p.eq) a.push_back({t.row, t.col, t.val});
  j["eq"] = {{"A", std::move(a)},
             {"b", std::vector<double>(p.b.data(), p.b.data() + p.b.size())}};
  return j;
}

inline SdpProblem sdp_problem_from_json(const nlohmann::json& j) {
  SdpProblem p;
  p.nvars = j.at("vars").get<int>();
  const auto c = j.at("objective").get<std::vector<double>>();
  p.c = Eigen::Map<const Eigen::VectorXd>(c.data(), c.size());
  for (const auto& jb : j.at("psd_blocks")) {
    PsdBlockMap blk;
    blk.size = jb.at("size").get<int>();
    blk.fj.assign(p.nvars, {});
    for (const auto& t : jb.at("F0"))
      blk.f0.push_back({t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<double>()});
    for (const auto& t : jb.at("Fj"))
      blk.fj.at(t.at(0).get<int>())
          .push_back({t.at(1).get<int>(), t.at(2).get<int>(), t.at(3).get<double>()});
    p.blocks.push_back(std::move(blk));
  }
  const auto& je = j.at("eq");
  for (const auto& t : je.at("A"))
    p.eq.push_back({t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<double>()});
  const auto b = je.at("b").get<std::vector<double>>();
  p.b = Eigen::Map<const Eigen::VectorXd>(b.data(), b.size());
  p.neq = static_cast<int>(b.size());
  p.validate();
  return p;
}

inline SdpStatus sdp_status_from_string(const std::string& s) {
  if (s == "Optimal") return SdpStatus::Optimal;
  if (s == "Infeasible") return SdpStatus::Infeasible;
  if (s == "Unbounded") return SdpStatus::Unbounded;
  if (s == "MaxIter") return SdpStatus::MaxIter;
  if (s == "NumericalTrouble") return SdpStatus::NumericalTrouble;
  throw std::runtime_error("unknown SDP status string: " + s);
}

inline nlohmann::json sdp_solution_to_json(const SdpSolution& s) {
  nlohmann::json j;
  j["status"] = to_string(s.status);
  j["y"] = std::vector<double>(s.y.data(), s.y.data() + s.y.size());
  nlohmann::json duals = nlohmann::json::array();
  for (const auto& z : s.block_duals) {
    nlohmann::json jz;
    jz["size"] = static_cast<int>(z.rows());
    std::vector<double> flat(z.size());
    for (int r = 0; r < z.rows(); ++r)
      for (int c = 0; c < z.cols(); ++c) flat[r * z.cols() + c] = z(r, c);
    jz["values"] = std::move(flat);
    duals.push_back(std::move(jz));
  }
  j["block_duals"] = std::move(duals);
  j["eq_duals"] = std::vector<double>(s.eq_duals.data(), s.eq_duals.data() + s.eq_duals.size());
  j["pcost"] = s.pcost;
  j["dcost"] = s.dcost;
  j["primal_residual"] = s.primal_residual;
  j["dual_residual"] = s.dual_residual;
  j["gap"] = s.gap;
  j["iterations"] = s.iterations;
  return j;
}

inline SdpSolution sdp_solution_from_json(const nlohmann::json& j) {
  SdpSolution s;
  s.status = sdp_status_from_string(j.at("status").get<std::string>());
  const auto y = j.at("y").get<std::vector<double>>();
  s.y = Eigen::Map<const Eigen::VectorXd>(y.data(), y.size());
  for (const auto& jz : j.at("block_duals")) {
    const int d = jz.at("size").get<int>();
    const auto flat = jz.at("values").get<std::vector<double>>();
    if (static_cast<int>(flat.size()) != d * d)
      throw std::runtime_error("block dual: dense length does not match size");
    Eigen::MatrixXd z(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) z(r, c) = flat[r * d + c];
    s.block_duals.push_back(std::move(z));
  }
  const auto ed = j.at("eq_duals").get<std::vector<double>>();
  s.eq_duals = Eigen::Map<const Eigen::VectorXd>(ed.data(), ed.size());
  s.pcost = j.at("pcost").get<double>();
  s.dcost = j.at("dcost").get<double>();
  s.primal_residual = j.at("primal_residual").get<double>();
  s.dual_residual = j.at("dual_residual").get<double>();
  s.gap = j.at("gap").get<double>();
  s.iterations = j.at("iterations").get<int>();
  return s;
}

// runs `command <problem.json> <solution.json>` and reads the result back;
// lets an out-of-process solver stand in for the built-in one
class ExternalProcessBackend : public SdpBackend {
 public:
  explicit ExternalProcessBackend(std::string command) : command_(std::move(command)) {
    if (command_.empty())
      throw std::invalid_argument("ExternalProcessBackend: empty command");
  }

  std::string name() const override { return "external:" + command_; }

  SdpSolution solve(const SdpProblem& p, const SolveOptions& opts) const override {
    (void)opts;
    const std::string stem = scratch_stem();
    const std::string in_path = stem + ".problem.json";
    const std::string out_path = stem + ".solution.json";
    {
      std::ofstream out(in_path);
      if (!out)
        throw std::runtime_error("ExternalProcessBackend: cannot write " + in_path);
      out << sdp_problem_to_json(p).dump() << "\n";
    }
    const std::string cmd = command_ + " '" + in_path + "' '" + out_path + "'";
    const int rc = std::system(cmd.c_str());
    if (rc != 0) {
      std::remove(in_path.c_str());
      throw std::runtime_error("ExternalProcessBackend: command failed with status " +
                               std::to_string(rc));
    }
    std::ifstream in(out_path);
    if (!in)
      throw std::runtime_error("ExternalProcessBackend: no solution file " + out_path);
    nlohmann::json j;
    in >> j;
    SdpSolution sol = sdp_solution_from_json(j);
    std::remove(in_path.c_str());
    std::remove(out_path.c_str());
    return sol;
  }

 private:
  static std::string scratch_stem() {
    static std::atomic<int> counter{0};
    std::ostringstream ss;
    ss << "/tmp/pmo-backend-" << ::getpid() << "-" << counter.fetch_add(1);
    return ss.str();
  }

  std::string command_;
};

}  // namespace pmo
