#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "icdof/exact_scalar.hpp"
#include "icdof/rational.hpp"

namespace icdof {

namespace detail {

inline BigInt lcm_big(const BigInt& a, const BigInt& b) { return a / boost::multiprecision::gcd(a, b) * b; }

}  // namespace detail

/*
 * Looks for a nontrivial rational dependency sum_j c_j * values[j] = 0.
 *
 * Each value is a coefficient vector over the monomials that occur; the
 * matrix has one row per monomial and one column per value. Rows are cleared
 * of denominators (this does not change the kernel) and reduced with
 * fraction-free Bareiss elimination. The first column without a pivot gives
 * a kernel vector by back substitution, returned as a primitive integer
 * vector with a positive last nonzero entry. Returns nullopt iff the values
 * are linearly independent over Q.
 */
inline std::optional<std::vector<BigInt>> find_rational_dependency(std::span<const ExactScalar> values) {
  const std::size_t n = values.size();
  if (n == 0) return std::nullopt;
  std::map<std::uint32_t, std::size_t> row_of;
  for (const ExactScalar& v : values) {
    for (const Term& t : v.terms()) row_of.emplace(t.monomial.id(), 0);
  }
  std::size_t next = 0;
  for (auto& [id, row] : row_of) row = next++;
  const std::size_t m = row_of.size();

  std::vector<std::vector<Rational>> q(m, std::vector<Rational>(n));
  for (std::size_t j = 0; j < n; ++j) {
    for (const Term& t : values[j].terms()) q[row_of[t.monomial.id()]][j] = t.coefficient;
  }
  std::vector<std::vector<BigInt>> a(m, std::vector<BigInt>(n));
  for (std::size_t i = 0; i < m; ++i) {
    BigInt l = 1;
    for (const Rational& x : q[i]) {
      if (!x.is_zero()) l = detail::lcm_big(l, x.denominator());
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (!q[i][j].is_zero()) a[i][j] = q[i][j].numerator() * (l / q[i][j].denominator());
    }
  }

  BigInt prev = 1;
  std::size_t r = 0;
  std::size_t free_col = n;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = r;
    while (p < m && a[p][c] == 0) ++p;
    if (p == m) {
      free_col = c;
      break;
    }
    std::swap(a[p], a[r]);
    for (std::size_t i = r + 1; i < m; ++i) {
      for (std::size_t j = c + 1; j < n; ++j) a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) / prev;
      a[i][c] = 0;
    }
    prev = a[r][c];
    ++r;
  }
  if (free_col == n) return std::nullopt;

  // Rows 0..free_col-1 are upper triangular on columns 0..free_col-1.
  const std::size_t f = free_col;
  std::vector<BigRational> x(f + 1);
  x[f] = 1;
  for (std::size_t k = f; k-- > 0;) {
    BigRational s = BigRational(a[k][f]);
    for (std::size_t j = k + 1; j < f; ++j) s += BigRational(a[k][j]) * x[j];
    x[k] = -s / BigRational(a[k][k]);
  }
  BigInt den = 1;
  for (const BigRational& v : x) den = detail::lcm_big(den, boost::multiprecision::denominator(v));
  std::vector<BigInt> out(n, 0);
  BigInt g = 0;
  for (std::size_t j = 0; j <= f; ++j) {
    out[j] = boost::multiprecision::numerator(x[j]) * (den / boost::multiprecision::denominator(x[j]));
    g = boost::multiprecision::gcd(g, out[j]);
  }
  for (BigInt& v : out) v /= g;
  return out;
}

}  // namespace icdof
