#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pmo/pmo.hpp"

namespace {

constexpr int kExitParse = 1;
constexpr int kExitSolver = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitInfeasiblePoint = 4;
constexpr int kExitNotCertified = 5;

std::shared_ptr<const pmo::SdpBackend> backend_from_env() {
  const char* cmd = std::getenv("PMO_BACKEND");
  if (cmd == nullptr || *cmd == '\0') return nullptr;
  return std::make_shared<pmo::ExternalProcessBackend>(cmd);
}

Eigen::VectorXd parse_point(const std::string& text, int n) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    double v = std::stod(item, &pos);
    while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
    if (pos != item.size()) throw pmo::ParseError("bad coordinate: " + item);
    vals.push_back(v);
  }
  if (static_cast<int>(vals.size()) != n)
    throw pmo::ParseError("point has " + std::to_string(vals.size()) +
                          " coordinates, the problem has " + std::to_string(n) +
                          " variables");
  return Eigen::Map<Eigen::VectorXd>(vals.data(), vals.size());
}

struct SolveFlags {
  std::string path;
  int kmin = 0;  // 0 = auto
  int kmax = 6;
  double tol = 1e-8;
  double rank_tol = 1e-6;
  double atom_tol = 1e-6;
  unsigned seed = 0;
  bool convex_auto = false;
  bool json = false;
  bool verbose = false;
};

int cmd_solve(const SolveFlags& fl) {
  pmo::ProblemFile pf = pmo::load_problem(fl.path);
  pmo::SolveOptions sopts;
  sopts.tol = fl.tol;
  sopts.seed = fl.seed;
  sopts.verbose = fl.verbose;
  sopts.backend = backend_from_env();

  if (fl.convex_auto) {
    pmo::SosConvexity cf = pmo::is_sos_convex_poly(pf.objective, sopts);
    pmo::SosConvexity cg = pmo::is_sos_convex_negG(pf.matrix, sopts);
    if (cf.certified && cg.certified) {
      pmo::ConvexSolve cs = pmo::solve_convex(pf.objective, pf.matrix, sopts);
      if (fl.json) {
        pmo::JsonWriter w;
        write_convex_report(w, cs);
        std::fputs(w.str().c_str(), stdout);
      } else {
        std::fputs("both convexity certificates found\n", stdout);
        std::fputs(pmo::convex_report_text(cs).c_str(), stdout);
      }
      return 0;
    }
    if (!fl.json)
      std::fputs("convexity certificates incomplete, falling back to the hierarchy\n",
                 stdout);
  }

  pmo::HierarchyOptions hopts;
  hopts.k_min = fl.kmin;
  hopts.k_max = fl.kmax;
  hopts.rank_tol = fl.rank_tol;
  hopts.atom_tol = fl.atom_tol;
  hopts.seed = fl.seed;
  hopts.solve = sopts;
  pmo::HierarchyResult hr = pmo::run_hierarchy(pf.objective, pf.matrix, hopts);

  if (fl.json) {
    pmo::JsonWriter w;
    write_hierarchy_report(w, hr);
    std::fputs(w.str().c_str(), stdout);
  } else {
    std::fputs(pmo::hierarchy_report_text(hr).c_str(), stdout);
  }
  if (hr.converged) return 0;
  if (!hr.orders.empty() && hr.orders.back().status != pmo::SdpStatus::Optimal)
    return kExitSolver;
  return kExitNoConvergence;
}

struct AuditFlags {
  std::string path;
  std::string point;
  double rank_tol = 1e-6;
  double feas_tol = 1e-6;
  bool json = false;
};

int cmd_audit(const AuditFlags& fl) {
  pmo::ProblemFile pf = pmo::load_problem(fl.path);
  Eigen::VectorXd u = parse_point(fl.point, pf.nvars());
  pmo::AuditOptions opts;
  opts.rank_tol = fl.rank_tol;
  opts.feas_tol = fl.feas_tol;
  pmo::OptimalityReport rep = pmo::audit(pf.objective, pf.matrix, u, opts);
  if (fl.json) {
    pmo::JsonWriter w;
    write_audit_report(w, rep);
    std::fputs(w.str().c_str(), stdout);
  } else {
    std::fputs(pmo::audit_report_text(rep).c_str(), stdout);
  }
  return 0;
}

struct CertifyFlags {
  std::string path;
  double gamma = 0.0;
  int order = 0;
  double tol = -1.0;
  std::string output;
  bool json = false;
  bool verbose = false;
};

int cmd_certify(const CertifyFlags& fl) {
  pmo::ProblemFile pf = pmo::load_problem(fl.path);
  pmo::SolveOptions sopts;
  sopts.verbose = fl.verbose;
  sopts.backend = backend_from_env();
  pmo::CertifyResult res =
      pmo::certify_qm_membership(pf.objective, fl.gamma, pf.matrix, fl.order, fl.tol, sopts);
  if (!res.certified()) {
    std::fprintf(stderr, "not certified: %s\n", res.reason.c_str());
    return kExitNotCertified;
  }
  pmo::JsonWriter w;
  write_certificate(w, *res.certificate, res.residual);
  std::string out_path = fl.output;
  if (out_path.empty()) out_path = fl.path + ".cert.json";
  std::ofstream out(out_path);
  if (!out) {
    std::fprintf(stderr, "cannot write certificate file: %s\n", out_path.c_str());
    return kExitSolver;
  }
  out << w.str();
  if (fl.json) {
    std::fputs(w.str().c_str(), stdout);
  } else {
    std::printf("certified: gamma=%.12e order=%d residual=%.3e\n", res.certificate->gamma,
                res.certificate->k, res.residual);
    std::printf("certificate written to %s\n", out_path.c_str());
  }
  return 0;
}

// offline solver mode used when this binary itself serves as an external
// backend; always runs the built-in solver so a backend chain cannot recurse
int cmd_solve_sdp(const std::string& in_path, const std::string& out_path) {
  std::ifstream in(in_path);
  if (!in) {
    std::fprintf(stderr, "cannot open %s\n", in_path.c_str());
    return kExitParse;
  }
  nlohmann::json j;
  in >> j;
  pmo::SdpProblem p = pmo::sdp_problem_from_json(j);
  pmo::SdpSolution sol = pmo::solve(p, {});
  std::ofstream out(out_path);
  if (!out) {
    std::fprintf(stderr, "cannot write %s\n", out_path.c_str());
    return kExitSolver;
  }
  out << pmo::sdp_solution_to_json(sol).dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polynomial matrix optimization via the moment-SOS hierarchy"};
  app.require_subcommand(1);

  SolveFlags sf;
  CLI::App* solve = app.add_subcommand("solve", "run the relaxation hierarchy");
  solve->add_option("file", sf.path, "problem JSON file")->required();
  solve->add_option("--kmin", sf.kmin, "first relaxation order (0 = auto)");
  solve->add_option("--kmax", sf.kmax, "last relaxation order")->capture_default_str();
  solve->add_option("--tol", sf.tol, "cone solver tolerance")->capture_default_str();
  solve->add_option("--rank-tol", sf.rank_tol, "rank decision tolerance")
      ->capture_default_str();
  solve->add_option("--atom-tol", sf.atom_tol, "atom recovery tolerance")
      ->capture_default_str();
  solve->add_option("--seed", sf.seed, "seed for randomized extraction steps")
      ->capture_default_str();
  solve->add_flag("--convex-auto", sf.convex_auto,
                  "try the SOS-convex fast path before the hierarchy");
  solve->add_flag("--json", sf.json, "machine-readable report");
  solve->add_flag("--verbose", sf.verbose, "trace the interior-point iterations");

  AuditFlags af;
  CLI::App* audit = app.add_subcommand("audit", "check optimality conditions at a point");
  audit->add_option("file", af.path, "problem JSON file")->required();
  audit->add_option("--point", af.point, "comma-separated coordinates")->required();
  audit->add_option("--rank-tol", af.rank_tol, "rank decision tolerance")
      ->capture_default_str();
  audit->add_option("--feas-tol", af.feas_tol, "feasibility tolerance")
      ->capture_default_str();
  audit->add_flag("--json", af.json, "machine-readable report");

  CertifyFlags cf;
  CLI::App* certify =
      app.add_subcommand("certify", "certify f - gamma as a quadratic module member");
  certify->add_option("file", cf.path, "problem JSON file")->required();
  certify->add_option("--gamma", cf.gamma, "lower bound to certify")->required();
  certify->add_option("--order", cf.order, "certificate order k")->required();
  certify->add_option("--tol", cf.tol, "residual tolerance (negative = default scale)");
  certify->add_option("-o,--output", cf.output, "certificate path (default <file>.cert.json)");
  certify->add_flag("--json", cf.json, "also print the certificate to stdout");
  certify->add_flag("--verbose", cf.verbose, "trace the interior-point iterations");

  std::string sdp_in, sdp_out;
  CLI::App* solve_sdp = app.add_subcommand(
      "solve-sdp", "solve a serialized cone problem (external-backend protocol)");
  solve_sdp->add_option("problem", sdp_in, "problem JSON")->required();
  solve_sdp->add_option("solution", sdp_out, "solution JSON to write")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return cmd_solve(sf);
    if (*audit) return cmd_audit(af);
    if (*certify) return cmd_certify(cf);
    if (*solve_sdp) return cmd_solve_sdp(sdp_in, sdp_out);
  } catch (const pmo::ParseError& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return kExitParse;
  } catch (const pmo::InfeasiblePoint& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return kExitInfeasiblePoint;
  } catch (const nlohmann::json::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return kExitParse;
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return kExitSolver;
  }
  return 0;
}
