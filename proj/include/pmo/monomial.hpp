#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace pmo {

// Exponent vector of a monomial x^a = x_1^{a_1} ... x_n^{a_n}.
using Exponents = std::vector<int>;

inline int degree_of(const Exponents& e) {
  return std::accumulate(e.begin(), e.end(), 0);
}

struct Monomial {
  Exponents exps;

  Monomial() = default;
  explicit Monomial(Exponents e) : exps(std::move(e)) {
    for (int a : exps)
      if (a < 0) throw std::invalid_argument("Monomial: negative exponent");
  }

  int nvars() const { return static_cast<int>(exps.size()); }
  int degree() const { return degree_of(exps); }

  bool operator==(const Monomial& o) const { return exps == o.exps; }
  bool operator!=(const Monomial& o) const { return exps != o.exps; }
};

// Graded lexicographic order: lower total degree first; within a degree,
// a precedes b when the first nonzero entry of a-b is positive.  This puts
// [1, x1, x2, x1^2, x1x2, x2^2, ...] in their conventional display order.
inline bool graded_lex_less(const Exponents& a, const Exponents& b) {
  const int da = degree_of(a), db = degree_of(b);
  if (da != db) return da < db;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] > b[i];
  }
  return false;
}

struct GradedLexLess {
  bool operator()(const Exponents& a, const Exponents& b) const {
    return graded_lex_less(a, b);
  }
  bool operator()(const Monomial& a, const Monomial& b) const {
    return graded_lex_less(a.exps, b.exps);
  }
};

struct ExponentsHash {
  std::size_t operator()(const Exponents& e) const {
    std::size_t h = 1469598103934665603ull;
    for (int a : e) {
      h ^= static_cast<std::size_t>(a) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  }
};

// All monomials of degree <= d in n variables, in graded lex order.
class MonomialBasis {
 public:
  MonomialBasis(int nvars, int degree) : nvars_(nvars), degree_(degree) {
    if (nvars < 0 || degree < 0)
      throw std::invalid_argument("MonomialBasis: nvars and degree must be >= 0");
    if (nvars == 0) {
      list_.push_back({});
    } else {
      Exponents e(nvars, 0);
      for (int d = 0; d <= degree; ++d) emit(e, 0, d);
    }
    index_.reserve(list_.size());
    for (std::size_t i = 0; i < list_.size(); ++i)
      index_.emplace(list_[i], static_cast<int>(i));
  }

  int size() const { return static_cast<int>(list_.size()); }
  int nvars() const { return nvars_; }
  int degree() const { return degree_; }

  const Exponents& operator[](int i) const { return list_[i]; }
  const std::vector<Exponents>& list() const { return list_; }

  bool contains(const Exponents& e) const { return index_.count(e) != 0; }

  int index_of(const Exponents& e) const {
    auto it = index_.find(e);
    if (it == index_.end())
      throw std::out_of_range("MonomialBasis: exponent vector not in basis");
    return it->second;
  }

  // binomial(n + d, d), the basis length
  static std::int64_t count(int nvars, int degree) {
    std::int64_t c = 1;
    for (int i = 1; i <= degree; ++i) c = c * (nvars + i) / i;
    return c;
  }

 private:
  void emit(Exponents& e, int pos, int remaining) {
    if (pos == nvars_ - 1) {
      e[pos] = remaining;
      list_.push_back(e);
      e[pos] = 0;
      return;
    }
    // leading variable takes the largest exponent first (lex-descending tie-break)
    for (int a = remaining; a >= 0; --a) {
      e[pos] = a;
      emit(e, pos + 1, remaining - a);
    }
    e[pos] = 0;
  }

  int nvars_;
  int degree_;
  std::vector<Exponents> list_;
  std::unordered_map<Exponents, int, ExponentsHash> index_;
};

inline Exponents add_exps(const Exponents& a, const Exponents& b) {
  Exponents r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

}  // namespace pmo
