#pragma once

#include <cstdint>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "icdof/discrete_dist.hpp"
#include "icdof/error.hpp"
#include "icdof/exact_scalar.hpp"

namespace icdof {

/// The formal generator standing for entry (i, j), 0-based; named "h_<i+1>_<j+1>".
inline Generator channel_generator(int i, int j) {
  return Generator::named("h_" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
}

/// K x K channel matrix with exact entries, row i = receiver, column j = transmitter.
class ChannelMatrix {
 public:
  ChannelMatrix(int K, std::vector<ExactScalar> entries) : K_(K), entries_(std::move(entries)) {
    if (K < 2) fail(ErrorCode::invalid_argument, "channel needs K >= 2 users, got " + std::to_string(K));
    if (entries_.size() != static_cast<std::size_t>(K) * K) {
      fail(ErrorCode::invalid_argument, "channel with K=" + std::to_string(K) + " needs " + std::to_string(K * K) +
                                            " entries, got " + std::to_string(entries_.size()));
    }
  }

  /// Every entry an independent generator h_i_j.
  static ChannelMatrix generic(int K) {
    if (K < 2) fail(ErrorCode::invalid_argument, "channel needs K >= 2 users, got " + std::to_string(K));
    std::vector<ExactScalar> e;
    e.reserve(static_cast<std::size_t>(K) * K);
    for (int i = 0; i < K; ++i) {
      for (int j = 0; j < K; ++j) e.emplace_back(channel_generator(i, j));
    }
    return ChannelMatrix(K, std::move(e));
  }

  int K() const noexcept { return K_; }
  const ExactScalar& operator()(int i, int j) const { return entries_.at(static_cast<std::size_t>(i) * K_ + j); }
  const std::vector<ExactScalar>& entries() const noexcept { return entries_; }

  /// Off-diagonal entries in row-major order: (1,2), (1,3), ..., (2,1), (2,3), ...
  std::vector<ExactScalar> off_diagonal() const {
    std::vector<ExactScalar> out;
    for (int i = 0; i < K_; ++i) {
      for (int j = 0; j < K_; ++j) {
        if (i != j) out.push_back((*this)(i, j));
      }
    }
    return out;
  }

  friend bool operator==(const ChannelMatrix&, const ChannelMatrix&) = default;

 private:
  int K_;
  std::vector<ExactScalar> entries_;
};

/// The 3-user matrix [[1,0,0],[1,lambda,0],[1,1,1]].
inline ChannelMatrix hlambda_matrix(const Rational& lambda) {
  return ChannelMatrix(3, {1, 0, 0, 1, ExactScalar(lambda), 0, 1, 1, 1});
}

/// phi(K, d) = C(K(K-1) + d, d).
inline BigInt phi(int K, int d) {
  if (K < 2 || d < 0) fail(ErrorCode::invalid_argument, "phi needs K >= 2 and d >= 0");
  const BigInt n = BigInt(K) * (K - 1) + d;
  BigInt out = 1;
  for (int k = 1; k <= d; ++k) out = out * (n - d + k) / k;
  return out;
}

/*
 * Monomials of degree <= d in the K(K-1) off-diagonal variables, each stored
 * as an exponent vector indexed like ChannelMatrix::off_diagonal(). Order:
 * the constant first, then by degree; within a degree, lexicographically by
 * exponent vector with larger exponents on earlier variables first.
 */
struct MonomialBasis {
  int K = 0;
  int d = 0;
  std::vector<std::vector<std::uint32_t>> exponents;

  std::size_t size() const noexcept { return exponents.size(); }

  std::uint32_t degree(std::size_t idx) const {
    std::uint32_t s = 0;
    for (auto e : exponents.at(idx)) s += e;
    return s;
  }

  /// f_idx evaluated at the given off-diagonal values.
  ExactScalar evaluate(std::size_t idx, const std::vector<ExactScalar>& offdiag) const {
    ExactScalar out(1);
    const auto& ex = exponents.at(idx);
    for (std::size_t v = 0; v < ex.size(); ++v) {
      for (std::uint32_t k = 0; k < ex[v]; ++k) out *= offdiag[v];
    }
    return out;
  }

  /// f_idx as a formal monomial in the generators h_i_j.
  Monomial formal(std::size_t idx) const {
    std::vector<std::pair<Generator, std::uint32_t>> factors;
    const auto& ex = exponents.at(idx);
    std::size_t v = 0;
    for (int i = 0; i < K; ++i) {
      for (int j = 0; j < K; ++j) {
        if (i == j) continue;
        if (ex[v] > 0) factors.emplace_back(channel_generator(i, j), ex[v]);
        ++v;
      }
    }
    return Monomial::from_powers(factors);
  }

  std::string label(std::size_t idx) const { return formal(idx).str(); }
};

namespace detail {

inline void exponent_vectors(std::size_t vars, std::uint32_t degree, std::size_t pos, std::vector<std::uint32_t>& cur,
                             std::vector<std::vector<std::uint32_t>>& out) {
  if (pos + 1 == vars) {
    cur[pos] = degree;
    out.push_back(cur);
    cur[pos] = 0;
    return;
  }
  for (std::uint32_t e = degree + 1; e-- > 0;) {
    cur[pos] = e;
    exponent_vectors(vars, degree - e, pos + 1, cur, out);
  }
  cur[pos] = 0;
}

}  // namespace detail

inline MonomialBasis enumerate_monomials(int K, int d) {
  const BigInt count = phi(K, d);
  if (count > BigInt(kDefaultAtomBudget)) {
    fail(ErrorCode::budget_exceeded, "phi(" + std::to_string(K) + "," + std::to_string(d) + ") = " + count.str() +
                                         " monomials exceeds the budget");
  }
  MonomialBasis basis;
  basis.K = K;
  basis.d = d;
  const std::size_t vars = static_cast<std::size_t>(K) * (K - 1);
  std::vector<std::uint32_t> cur(vars, 0);
  for (int t = 0; t <= d; ++t) detail::exponent_vectors(vars, static_cast<std::uint32_t>(t), 0, cur, basis.exponents);
  return basis;
}

/// The input alphabet {sum_i a_i f_i(offdiag(H)) : a_i in {1..N}}, without
/// repetitions, in odometer order over (a_1, ..., a_phi).
inline std::vector<ExactScalar> build_wn(const ChannelMatrix& H, int d, int N,
                                         std::size_t budget = kDefaultAtomBudget) {
  if (N < 1) fail(ErrorCode::invalid_argument, "N must be >= 1, got " + std::to_string(N));
  const BigInt p = phi(H.K(), d);
  const BigInt count = (N == 1 || p <= 64) ? boost::multiprecision::pow(BigInt(N), p.convert_to<unsigned>())
                                           : BigInt(1) << 64;
  if (count > BigInt(budget)) {
    fail(ErrorCode::budget_exceeded, "|W_N| = " + count.str() + " exceeds the atom budget of " +
                                         std::to_string(budget));
  }
  const MonomialBasis basis = enumerate_monomials(H.K(), d);
  const std::vector<ExactScalar> offdiag = H.off_diagonal();
  std::vector<ExactScalar> f;
  f.reserve(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) f.push_back(basis.evaluate(i, offdiag));

  std::vector<int> a(f.size(), 1);
  ExactScalar current;
  for (const ExactScalar& x : f) current += x;
  std::vector<ExactScalar> out;
  std::unordered_set<ExactScalar> seen;
  out.reserve(count.convert_to<std::size_t>());
  for (;;) {
    if (seen.insert(current).second) out.push_back(current);
    std::size_t pos = 0;
    while (pos < a.size() && a[pos] == N) {
      current -= f[pos].scaled(Rational(N - 1));
      a[pos] = 1;
      ++pos;
    }
    if (pos == a.size()) break;
    current += f[pos];
    ++a[pos];
  }
  return out;
}

inline bool is_fully_connected(const ChannelMatrix& H) {
  for (const ExactScalar& e : H.entries()) {
    if (e.is_zero()) return false;
  }
  return true;
}

}  // namespace icdof
