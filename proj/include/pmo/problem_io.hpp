#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include <json.hpp>

#include "pmo/polymatrix.hpp"

namespace pmo {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// an optimization instance as stored on disk: minimize the objective subject
// to the symmetric polynomial matrix being PSD
struct ProblemFile {
  Polynomial objective;
  PolyMatrix matrix;

  int nvars() const { return objective.nvars(); }
};

namespace io_detail {

inline Polynomial poly_from_json(const nlohmann::json& terms, int nvars,
                                 const std::string& where) {
  if (!terms.is_array()) throw ParseError(where + ": expected an array of terms");
  Polynomial p(nvars);
  for (const auto& t : terms) {
    if (!t.is_object() || !t.contains("exps") || !t.contains("coeff"))
      throw ParseError(where + ": each term needs \"exps\" and \"coeff\"");
    const auto& je = t.at("exps");
    if (!je.is_array() || static_cast<int>(je.size()) != nvars)
      throw ParseError(where + ": exponent vector length must equal nvars");
    Exponents e(nvars);
    for (int i = 0; i < nvars; ++i) {
      if (!je[i].is_number_integer() || je[i].get<int>() < 0)
        throw ParseError(where + ": exponents must be nonnegative integers");
      e[i] = je[i].get<int>();
    }
    if (!t.at("coeff").is_number())
      throw ParseError(where + ": coefficient must be a number");
    p.add_term(e, t.at("coeff").get<double>());
  }
  return p;
}

inline nlohmann::json poly_to_json(const Polynomial& p) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [mono, coeff] : p.terms()) {
    nlohmann::json t;
    t["exps"] = mono.exps;
    t["coeff"] = coeff;
    terms.push_back(std::move(t));
  }
  return terms;
}

}  // namespace io_detail

inline ProblemFile parse_problem(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("problem: top level must be an object");
  if (!j.contains("nvars") || !j.at("nvars").is_number_integer())
    throw ParseError("problem: missing integer \"nvars\"");
  const int n = j.at("nvars").get<int>();
  if (n < 0) throw ParseError("problem: nvars must be >= 0");
  if (!j.contains("objective")) throw ParseError("problem: missing \"objective\"");
  if (!j.contains("matrix") || !j.at("matrix").is_object())
    throw ParseError("problem: missing object \"matrix\"");

  ProblemFile pf;
  pf.objective = io_detail::poly_from_json(j.at("objective"), n, "objective");

  const auto& jm = j.at("matrix");
  if (!jm.contains("m") || !jm.at("m").is_number_integer())
    throw ParseError("matrix: missing integer \"m\"");
  const int m = jm.at("m").get<int>();
  if (m <= 0) throw ParseError("matrix: m must be >= 1");
  if (!jm.contains("entries") || !jm.at("entries").is_array())
    throw ParseError("matrix: missing array \"entries\"");

  pf.matrix = PolyMatrix(n, m);
  std::set<std::pair<int, int>> seen;
  for (const auto& ent : jm.at("entries")) {
    if (!ent.is_object() || !ent.contains("i") || !ent.contains("j") ||
        !ent.contains("poly"))
      throw ParseError("matrix: each entry needs \"i\", \"j\", \"poly\"");
    const int i = ent.at("i").get<int>();
    const int jj = ent.at("j").get<int>();
    if (i < 1 || jj < i || jj > m)
      throw ParseError("matrix: entry indices must satisfy 1 <= i <= j <= m");
    if (!seen.insert({i, jj}).second)
      throw ParseError("matrix: duplicate entry (" + std::to_string(i) + ", " +
                       std::to_string(jj) + ")");
    std::string where = "matrix entry (" + std::to_string(i) + ", " +
                        std::to_string(jj) + ")";
    pf.matrix.set(i - 1, jj - 1, io_detail::poly_from_json(ent.at("poly"), n, where));
  }
  return pf;
}

inline ProblemFile parse_problem_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& ex) {
    throw ParseError(ex.what());
  }
  return parse_problem(j);
}

inline ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open problem file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_problem_text(ss.str());
}

// canonical form: terms in graded lex order, matrix entries in row-major
// upper-triangle order with zero polynomials omitted
inline nlohmann::json problem_to_json(const ProblemFile& pf) {
  nlohmann::json j;
  j["nvars"] = pf.nvars();
  j["objective"] = io_detail::poly_to_json(pf.objective);
  nlohmann::json entries = nlohmann::json::array();
  const int m = pf.matrix.size();
  for (int i = 0; i < m; ++i)
    for (int jj = i; jj < m; ++jj) {
      const Polynomial& p = pf.matrix.at(i, jj);
      if (p.terms().empty()) continue;
      nlohmann::json ent;
      ent["i"] = i + 1;
      ent["j"] = jj + 1;
      ent["poly"] = io_detail::poly_to_json(p);
      entries.push_back(std::move(ent));
    }
  j["matrix"] = {{"m", m}, {"entries", std::move(entries)}};
  return j;
}

inline std::string serialize_problem(const ProblemFile& pf) {
  return problem_to_json(pf).dump(2) + "\n";
}

inline void save_problem(const ProblemFile& pf, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write problem file: " + path);
  out << serialize_problem(pf);
}

}  // namespace pmo
