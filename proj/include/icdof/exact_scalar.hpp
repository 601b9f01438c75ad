#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "icdof/error.hpp"
#include "icdof/monomial.hpp"
#include "icdof/rational.hpp"

namespace icdof {

struct Term {
  Monomial monomial;
  Rational coefficient;
  friend bool operator==(const Term&, const Term&) = default;
};

/*
 * A real number written as a polynomial with rational coefficients in
 * formal generators. Since generators are treated as algebraically
 * independent, two values are equal iff their coefficient maps are equal,
 * which makes equality (and hence collision detection in sums) decidable.
 *
 * Canonical form: terms sorted by monomial, no zero coefficients; the empty
 * term list is 0.
 */
class ExactScalar {
 public:
  ExactScalar() = default;

  // NOLINTNEXTLINE(google-explicit-constructor)
  ExactScalar(const Rational& c) {
    if (!c.is_zero()) terms_.push_back(Term{Monomial(), c});
  }
  // NOLINTNEXTLINE(google-explicit-constructor)
  ExactScalar(std::int64_t c) : ExactScalar(Rational(c)) {}
  // NOLINTNEXTLINE(google-explicit-constructor)
  ExactScalar(int c) : ExactScalar(Rational(c)) {}

  explicit ExactScalar(Generator g) { terms_.push_back(Term{Monomial(g), Rational(1)}); }

  ExactScalar(Monomial m, const Rational& c) {
    if (!c.is_zero()) terms_.push_back(Term{m, c});
  }

  /// Canonicalizes an arbitrary term list (merges duplicates, drops zeros).
  static ExactScalar from_terms(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.monomial < b.monomial; });
    ExactScalar out;
    out.terms_.reserve(terms.size());
    for (Term& t : terms) {
      if (!out.terms_.empty() && out.terms_.back().monomial == t.monomial) {
        out.terms_.back().coefficient += t.coefficient;
      } else {
        out.terms_.push_back(std::move(t));
      }
    }
    std::erase_if(out.terms_, [](const Term& t) { return t.coefficient.is_zero(); });
    return out;
  }

  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }

  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].monomial.is_constant());
  }

  /// The value as a rational, if it does not involve any generator.
  std::optional<Rational> as_rational() const {
    if (terms_.empty()) return Rational(0);
    if (terms_.size() == 1 && terms_[0].monomial.is_constant()) return terms_[0].coefficient;
    return std::nullopt;
  }

  Rational coefficient(Monomial m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const Term& t, Monomial key) { return t.monomial < key; });
    return (it != terms_.end() && it->monomial == m) ? it->coefficient : Rational(0);
  }

  std::uint32_t degree() const {
    std::uint32_t d = 0;
    for (const Term& t : terms_) d = std::max(d, t.monomial.degree());
    return d;
  }

  /// Generators occurring in the value, by name.
  std::vector<std::string> generator_names() const {
    std::vector<std::string> out;
    for (const Term& t : terms_) {
      for (const Power& p : t.monomial.powers()) out.push_back(SymbolTable::instance().generator_name(p.generator));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  ExactScalar operator-() const {
    ExactScalar out = *this;
    for (Term& t : out.terms_) t.coefficient = -t.coefficient;
    return out;
  }

  friend ExactScalar operator+(const ExactScalar& a, const ExactScalar& b) { return merge(a, b, false); }
  friend ExactScalar operator-(const ExactScalar& a, const ExactScalar& b) { return merge(a, b, true); }

  friend ExactScalar operator*(const ExactScalar& a, const ExactScalar& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (b.terms_.size() == 1 && b.terms_[0].monomial.is_constant()) return a.scaled(b.terms_[0].coefficient);
    if (a.terms_.size() == 1 && a.terms_[0].monomial.is_constant()) return b.scaled(a.terms_[0].coefficient);
    std::vector<Term> product;
    product.reserve(a.terms_.size() * b.terms_.size());
    for (const Term& x : a.terms_) {
      for (const Term& y : b.terms_) product.push_back(Term{x.monomial * y.monomial, x.coefficient * y.coefficient});
    }
    return from_terms(std::move(product));
  }

  ExactScalar& operator+=(const ExactScalar& o) { return *this = *this + o; }
  ExactScalar& operator-=(const ExactScalar& o) { return *this = *this - o; }
  ExactScalar& operator*=(const ExactScalar& o) { return *this = *this * o; }

  /// Multiplication by a rational constant.
  ExactScalar scaled(const Rational& c) const {
    if (c.is_zero()) return {};
    ExactScalar out = *this;
    for (Term& t : out.terms_) t.coefficient *= c;
    return out;
  }

  friend bool operator==(const ExactScalar& a, const ExactScalar& b) { return a.terms_ == b.terms_; }

  /// Storage order: a total order on canonical forms, fixed within a process.
  friend std::strong_ordering operator<=>(const ExactScalar& a, const ExactScalar& b) {
    const std::size_t n = std::min(a.terms_.size(), b.terms_.size());
    for (std::size_t i = 0; i < n; ++i) {
      const Term& x = a.terms_[i];
      const Term& y = b.terms_[i];
      if (x.monomial != y.monomial) return x.monomial <=> y.monomial;
      if (auto c = x.coefficient <=> y.coefficient; c != 0) return c;
    }
    return a.terms_.size() <=> b.terms_.size();
  }

  std::size_t hash() const {
    std::uint64_t h = 0x84222325cbf29ce4ULL;
    for (const Term& t : terms_) {
      h ^= t.monomial.id() + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
      h ^= t.coefficient.hash() + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }

  /// Floating evaluation; for diagnostics only, never for equality decisions.
  double eval_float(const std::map<std::string, double>& assignment) const {
    double sum = 0.0;
    for (const Term& t : terms_) {
      double v = t.coefficient.to_double();
      for (const Power& p : t.monomial.powers()) {
        const std::string& name = SymbolTable::instance().generator_name(p.generator);
        auto it = assignment.find(name);
        if (it == assignment.end()) fail(ErrorCode::invalid_argument, "missing assignment for generator '" + name + "'");
        v *= std::pow(it->second, static_cast<double>(p.exponent));
      }
      sum += v;
    }
    return sum;
  }

  /// Text form, e.g. "2*g1^2*g2 + 1/3"; terms in graded-lex order on names.
  std::string str() const {
    if (terms_.empty()) return "0";
    std::vector<const Term*> order;
    for (const Term& t : terms_) order.push_back(&t);
    std::sort(order.begin(), order.end(),
              [](const Term* a, const Term* b) { return graded_lex_before(a->monomial, b->monomial); });
    std::string out;
    for (const Term* t : order) {
      const bool negative = t->coefficient.sign() < 0;
      const Rational mag = t->coefficient.abs();
      std::string body;
      if (t->monomial.is_constant()) {
        body = mag.str();
      } else if (mag.is_one()) {
        body = t->monomial.str();
      } else {
        body = mag.str() + "*" + t->monomial.str();
      }
      if (out.empty()) {
        out = negative ? "-" + body : body;
      } else {
        out += negative ? " - " : " + ";
        out += body;
      }
    }
    return out;
  }

  friend std::ostream& operator<<(std::ostream& os, const ExactScalar& x) { return os << x.str(); }

 private:
  static ExactScalar merge(const ExactScalar& a, const ExactScalar& b, bool subtract) {
    ExactScalar out;
    out.terms_.reserve(a.terms_.size() + b.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < a.terms_.size() || j < b.terms_.size()) {
      if (j == b.terms_.size() || (i < a.terms_.size() && a.terms_[i].monomial < b.terms_[j].monomial)) {
        out.terms_.push_back(a.terms_[i++]);
      } else if (i == a.terms_.size() || b.terms_[j].monomial < a.terms_[i].monomial) {
        const Term& t = b.terms_[j++];
        out.terms_.push_back(Term{t.monomial, subtract ? -t.coefficient : t.coefficient});
      } else {
        Rational c = subtract ? a.terms_[i].coefficient - b.terms_[j].coefficient
                              : a.terms_[i].coefficient + b.terms_[j].coefficient;
        if (!c.is_zero()) out.terms_.push_back(Term{a.terms_[i].monomial, std::move(c)});
        ++i;
        ++j;
      }
    }
    return out;
  }

  std::vector<Term> terms_;
};

inline ExactScalar add(const ExactScalar& a, const ExactScalar& b) { return a + b; }
inline ExactScalar mul(const ExactScalar& a, const ExactScalar& b) { return a * b; }
inline ExactScalar negate(const ExactScalar& a) { return -a; }
inline bool is_zero(const ExactScalar& a) { return a.is_zero(); }
inline double eval_float(const ExactScalar& a, const std::map<std::string, double>& assignment) {
  return a.eval_float(assignment);
}

/// Ordering of constant (rational) values; throws for symbolic values.
inline Rational require_rational(const ExactScalar& x, std::string_view context) {
  auto q = x.as_rational();
  if (!q) fail(ErrorCode::invalid_argument, std::string(context) + " requires ordered rationals, got '" + x.str() + "'");
  return *q;
}

/// Deterministic, name-based order for serialization: rationals first by
/// value, then symbolic values by their text form.
inline bool display_before(const ExactScalar& a, const ExactScalar& b) {
  auto qa = a.as_rational();
  auto qb = b.as_rational();
  if (qa && qb) return *qa < *qb;
  if (qa || qb) return bool(qa);
  return a.str() < b.str();
}

}  // namespace icdof

template <>
struct std::hash<icdof::ExactScalar> {
  std::size_t operator()(const icdof::ExactScalar& x) const { return x.hash(); }
};
