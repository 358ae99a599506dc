#pragma once

#include <Eigen/Core>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "pmo/monomial.hpp"

namespace pmo {

// Sparse multivariate polynomial with real coefficients.  Terms are kept in a
// graded-lex ordered map with no explicit zeros; results of floating
// arithmetic drop coefficients below 1e-12 * max|coeff| to prevent spurious
// degree growth.
class Polynomial {
 public:
  using TermMap = std::map<Monomial, double, GradedLexLess>;

  static constexpr double kPruneRel = 1e-12;

  explicit Polynomial(int nvars = 0) : nvars_(nvars) {
    if (nvars < 0) throw std::invalid_argument("Polynomial: nvars must be >= 0");
  }

  static Polynomial constant(int nvars, double c) {
    Polynomial p(nvars);
    if (c != 0.0) p.terms_.emplace(Monomial(Exponents(nvars, 0)), c);
    return p;
  }

  // x_i with 0-based index i
  static Polynomial variable(int nvars, int i) {
    if (i < 0 || i >= nvars) throw std::out_of_range("Polynomial::variable: index");
    Exponents e(nvars, 0);
    e[i] = 1;
    Polynomial p(nvars);
    p.terms_.emplace(Monomial(std::move(e)), 1.0);
    return p;
  }

  static Polynomial term(int nvars, Exponents e, double c) {
    if (static_cast<int>(e.size()) != nvars)
      throw std::invalid_argument("Polynomial::term: exponent length != nvars");
    Polynomial p(nvars);
    if (c != 0.0) p.terms_.emplace(Monomial(std::move(e)), c);
    return p;
  }

  int nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  const TermMap& terms() const { return terms_; }

  // max term degree; the zero polynomial reports degree 0
  int degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;
  }

  double coeff(const Exponents& e) const {
    auto it = terms_.find(Monomial(e));
    return it == terms_.end() ? 0.0 : it->second;
  }

  double max_abs_coeff() const {
    double m = 0.0;
    for (const auto& [mono, c] : terms_) m = std::max(m, std::abs(c));
    return m;
  }

  void add_term(const Exponents& e, double c) {
    if (static_cast<int>(e.size()) != nvars_)
      throw std::invalid_argument("Polynomial::add_term: exponent length != nvars");
    if (c == 0.0) return;
    Monomial m(e);
    auto [it, inserted] = terms_.emplace(std::move(m), c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0.0) terms_.erase(it);
    }
  }

  double eval(const Eigen::VectorXd& u) const {
    if (u.size() != nvars_)
      throw std::invalid_argument("Polynomial::eval: point dimension " +
                                  std::to_string(u.size()) + " != nvars " +
                                  std::to_string(nvars_));
    double s = 0.0;
    for (const auto& [m, c] : terms_) {
      double t = c;
      for (int i = 0; i < nvars_; ++i)
        for (int k = 0; k < m.exps[i]; ++k) t *= u[i];
      s += t;
    }
    return s;
  }

  Polynomial partial(int i) const {
    if (i < 0 || i >= nvars_) throw std::out_of_range("Polynomial::partial: index");
    Polynomial r(nvars_);
    for (const auto& [m, c] : terms_) {
      if (m.exps[i] == 0) continue;
      Exponents e = m.exps;
      const double f = e[i];
      e[i] -= 1;
      r.add_term(e, c * f);
    }
    return r;
  }

  Polynomial& operator+=(const Polynomial& o) {
    check_same_vars(o);
    for (const auto& [m, c] : o.terms_) add_term(m.exps, c);
    prune();
    return *this;
  }

  Polynomial& operator-=(const Polynomial& o) {
    check_same_vars(o);
    for (const auto& [m, c] : o.terms_) add_term(m.exps, -c);
    prune();
    return *this;
  }

  Polynomial& operator*=(double a) {
    if (a == 0.0) {
      terms_.clear();
    } else {
      for (auto& [m, c] : terms_) c *= a;
    }
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(const Polynomial& a) {
    Polynomial r = a;
    r *= -1.0;
    return r;
  }
  friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_same_vars(b);
    Polynomial r(a.nvars_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_)
        r.add_term(add_exps(ma.exps, mb.exps), ca * cb);
    r.prune();
    return r;
  }

  bool operator==(const Polynomial& o) const {
    if (nvars_ != o.nvars_ || terms_.size() != o.terms_.size()) return false;
    auto it = terms_.begin(), jt = o.terms_.begin();
    for (; it != terms_.end(); ++it, ++jt)
      if (it->first != jt->first || it->second != jt->second) return false;
    return true;
  }
  bool operator!=(const Polynomial& o) const { return !(*this == o); }

  // drop |c| < rel * max|coeff|
  Polynomial& prune(double rel = kPruneRel) {
    const double thr = rel * max_abs_coeff();
    for (auto it = terms_.begin(); it != terms_.end();) {
      if (std::abs(it->second) < thr)
        it = terms_.erase(it);
      else
        ++it;
    }
    return *this;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      if (!first) os << (c < 0 ? " - " : " + ");
      else if (c < 0) os << "-";
      first = false;
      const double a = std::abs(c);
      bool wrote = false;
      if (a != 1.0 || m.degree() == 0) {
        os << a;
        wrote = true;
      }
      for (int i = 0; i < nvars_; ++i) {
        if (m.exps[i] == 0) continue;
        if (wrote) os << "*";
        os << "x" << (i + 1);
        if (m.exps[i] > 1) os << "^" << m.exps[i];
        wrote = true;
      }
    }
    return os.str();
  }

 private:
  void check_same_vars(const Polynomial& o) const {
    if (nvars_ != o.nvars_)
      throw std::invalid_argument("Polynomial: mixed variable counts " +
                                  std::to_string(nvars_) + " vs " +
                                  std::to_string(o.nvars_));
  }

  int nvars_;
  TermMap terms_;
};

inline double eval_poly(const Polynomial& p, const Eigen::VectorXd& u) {
  return p.eval(u);
}

inline std::vector<Polynomial> gradient(const Polynomial& p) {
  std::vector<Polynomial> g;
  g.reserve(p.nvars());
  for (int i = 0; i < p.nvars(); ++i) g.push_back(p.partial(i));
  return g;
}

inline Eigen::VectorXd eval_gradient(const Polynomial& p, const Eigen::VectorXd& u) {
  Eigen::VectorXd g(p.nvars());
  for (int i = 0; i < p.nvars(); ++i) g[i] = p.partial(i).eval(u);
  return g;
}

}  // namespace pmo
