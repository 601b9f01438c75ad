#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "icdof/error.hpp"
#include "icdof/exact_scalar.hpp"
#include "icdof/rational.hpp"

namespace icdof {

/// Largest number of atoms any operation will materialize unless told otherwise.
inline constexpr std::size_t kDefaultAtomBudget = 5'000'000;

struct Atom {
  ExactScalar value;
  Rational prob;
  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Finitely supported probability distribution on ExactScalar values with
/// exact rational probabilities. Atoms are kept in a canonical order (by
/// value hash, ties by value), so two distributions are equal iff their atom
/// lists are equal.
class DiscreteDist {
 public:
  /// Validated construction: probabilities positive and summing to exactly 1,
  /// support points pairwise distinct.
  static DiscreteDist from_atoms(std::vector<Atom> atoms) {
    if (atoms.empty()) fail(ErrorCode::invalid_argument, "distribution needs at least one atom");
    Rational total;
    for (const Atom& a : atoms) {
      if (a.prob.sign() <= 0) fail(ErrorCode::invalid_argument, "probability of '" + a.value.str() + "' is not positive");
      total += a.prob;
    }
    if (!total.is_one()) fail(ErrorCode::invalid_argument, "probabilities sum to " + total.str() + ", not 1");
    DiscreteDist d = trusted(std::move(atoms));
    for (std::size_t i = 1; i < d.atoms_.size(); ++i) {
      if (d.atoms_[i - 1].value == d.atoms_[i].value) {
        fail(ErrorCode::invalid_argument, "support not distinct: '" + d.atoms_[i].value.str() + "' repeated");
      }
    }
    return d;
  }

  static DiscreteDist point_mass(ExactScalar x) {
    DiscreteDist d;
    d.atoms_.push_back(Atom{std::move(x), Rational(1)});
    return d;
  }

  /// Skips validation; for results built by the algebra itself.
  static DiscreteDist trusted(std::vector<Atom> atoms) {
    std::vector<std::size_t> hashes;
    hashes.reserve(atoms.size());
    for (const Atom& a : atoms) hashes.push_back(a.value.hash());
    return trusted(std::move(atoms), hashes);
  }

  /// As above, with hashes[k] == atoms[k].value.hash() precomputed.
  static DiscreteDist trusted(std::vector<Atom> atoms, const std::vector<std::size_t>& hashes) {
    std::vector<std::pair<std::size_t, std::uint32_t>> keys;
    keys.reserve(atoms.size());
    for (std::size_t k = 0; k < atoms.size(); ++k) keys.emplace_back(hashes[k], static_cast<std::uint32_t>(k));
    std::sort(keys.begin(), keys.end(), [&](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first < b.first;
      return atoms[a.second].value < atoms[b.second].value;
    });
    DiscreteDist d;
    d.atoms_.reserve(atoms.size());
    for (const auto& key : keys) d.atoms_.push_back(std::move(atoms[key.second]));
    return d;
  }

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  bool is_deterministic() const noexcept { return atoms_.size() == 1; }

  Rational total_probability() const {
    Rational total;
    for (const Atom& a : atoms_) total += a.prob;
    return total;
  }

  /// P[X = x]; zero when x is not an atom.
  Rational probability_of(const ExactScalar& x) const {
    const std::size_t h = x.hash();
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x, [h](const Atom& a, const ExactScalar& key) {
      const std::size_t ha = a.value.hash();
      return ha != h ? ha < h : a.value < key;
    });
    return (it != atoms_.end() && it->value == x) ? it->prob : Rational(0);
  }

  friend bool operator==(const DiscreteDist&, const DiscreteDist&) = default;

 private:
  DiscreteDist() = default;
  std::vector<Atom> atoms_;
};

namespace detail {

[[noreturn]] inline void budget_exceeded(std::size_t budget) {
  fail(ErrorCode::budget_exceeded,
       "distribution would exceed the atom budget of " + std::to_string(budget) + " atoms");
}

/*
 * Value fingerprints modulo the Mersenne prime 2^61 - 1: each generator is
 * sent to a fixed pseudo-random residue and the polynomial is evaluated
 * there. The map is additive, and equal values always share a fingerprint,
 * so the number of distinct fingerprints of a sumset is a lower bound on
 * its true size. That lets convolve() refuse oversized results before it
 * materializes them.
 */
constexpr std::uint64_t kFingerprintPrime = (std::uint64_t(1) << 61) - 1;

inline std::uint64_t mod_mul(std::uint64_t a, std::uint64_t b) {
  const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  std::uint64_t lo = static_cast<std::uint64_t>(p & kFingerprintPrime);
  std::uint64_t hi = static_cast<std::uint64_t>(p >> 61);
  std::uint64_t s = lo + hi;
  return s >= kFingerprintPrime ? s - kFingerprintPrime : s;
}

inline std::uint64_t mod_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a + b;
  return s >= kFingerprintPrime ? s - kFingerprintPrime : s;
}

inline std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t out = 1;
  while (exp) {
    if (exp & 1) out = mod_mul(out, base);
    base = mod_mul(base, base);
    exp >>= 1;
  }
  return out;
}

inline std::uint64_t mod_of(const BigInt& v) {
  BigInt r = v % BigInt(kFingerprintPrime);
  if (r < 0) r += kFingerprintPrime;
  return r.convert_to<std::uint64_t>();
}

/// Fingerprint of x, or nullopt if a coefficient denominator vanishes mod p.
inline std::optional<std::uint64_t> fingerprint(const ExactScalar& x) {
  std::uint64_t acc = 0;
  for (const Term& t : x.terms()) {
    const std::uint64_t den = mod_of(t.coefficient.denominator());
    if (den == 0) return std::nullopt;
    std::uint64_t v = mod_mul(mod_of(t.coefficient.numerator()), mod_pow(den, kFingerprintPrime - 2));
    for (const Power& p : t.monomial.powers()) {
      std::uint64_t g = (p.generator + 1) * 0x9E3779B97F4A7C15ULL;
      g ^= g >> 29;
      g = g % (kFingerprintPrime - 2) + 2;
      v = mod_mul(v, mod_pow(g, p.exponent));
    }
    acc = mod_add(acc, v);
  }
  return acc;
}

/// Throws budget_exceeded when the support of A + B provably has more than
/// `budget` points.
inline void guard_sumset_size(const DiscreteDist& a, const DiscreteDist& b, std::size_t budget) {
  if (a.size() * b.size() <= budget) return;
  std::vector<std::uint64_t> fa, fb;
  fa.reserve(a.size());
  fb.reserve(b.size());
  for (const Atom& x : a.atoms()) {
    auto f = fingerprint(x.value);
    if (!f) return;
    fa.push_back(*f);
  }
  for (const Atom& y : b.atoms()) {
    auto f = fingerprint(y.value);
    if (!f) return;
    fb.push_back(*f);
  }
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(budget + 1);
  for (std::uint64_t x : fa) {
    for (std::uint64_t y : fb) {
      seen.insert(mod_add(x, y));
      if (seen.size() > budget) budget_exceeded(budget);
    }
  }
}

/// Builds a distribution atom by atom, merging equal values, with an
/// open-addressing index over the atom vector.
class AtomAccumulator {
 public:
  AtomAccumulator(std::size_t budget, std::size_t expected) : budget_(budget) {
    std::size_t cap = 16;
    while (cap < 2 * std::min(expected, budget)) cap <<= 1;
    slots_.assign(cap, 0);
    atoms_.reserve(std::min(expected, budget));
    hashes_.reserve(std::min(expected, budget));
  }

  void add(ExactScalar&& value, Rational&& prob) {
    const std::size_t h = value.hash();
    std::size_t mask = slots_.size() - 1;
    std::size_t i = static_cast<std::size_t>(h) & mask;
    while (slots_[i] != 0) {
      const std::uint32_t idx = slots_[i] - 1;
      if (hashes_[idx] == h && atoms_[idx].value == value) {
        atoms_[idx].prob += prob;
        return;
      }
      i = (i + 1) & mask;
    }
    if (atoms_.size() >= budget_) budget_exceeded(budget_);
    atoms_.push_back(Atom{std::move(value), std::move(prob)});
    hashes_.push_back(h);
    slots_[i] = static_cast<std::uint32_t>(atoms_.size());
    if (2 * atoms_.size() > slots_.size()) rehash();
  }

  DiscreteDist finish() { return DiscreteDist::trusted(std::move(atoms_), hashes_); }

 private:
  void rehash() {
    std::vector<std::uint32_t> slots(slots_.size() * 2, 0);
    const std::size_t mask = slots.size() - 1;
    for (std::size_t idx = 0; idx < atoms_.size(); ++idx) {
      std::size_t i = static_cast<std::size_t>(hashes_[idx]) & mask;
      while (slots[i] != 0) i = (i + 1) & mask;
      slots[i] = static_cast<std::uint32_t>(idx + 1);
    }
    slots_ = std::move(slots);
  }

  std::size_t budget_;
  std::vector<Atom> atoms_;
  std::vector<std::size_t> hashes_;
  std::vector<std::uint32_t> slots_;  // atom index + 1; 0 = empty
};

}  // namespace detail

/// Uniform distribution on pairwise distinct points.
inline DiscreteDist uniform_on(std::span<const ExactScalar> support) {
  if (support.empty()) fail(ErrorCode::invalid_argument, "uniform_on needs a non-empty support");
  const Rational p(1, static_cast<std::int64_t>(support.size()));
  std::vector<Atom> atoms;
  atoms.reserve(support.size());
  for (const ExactScalar& x : support) atoms.push_back(Atom{x, p});
  DiscreteDist d = DiscreteDist::trusted(std::move(atoms));
  for (std::size_t i = 1; i < d.size(); ++i) {
    if (d.atoms()[i - 1].value == d.atoms()[i].value) {
      fail(ErrorCode::invalid_argument, "support not distinct: '" + d.atoms()[i].value.str() + "' repeated");
    }
  }
  return d;
}

/// Distribution of c*X. Multiplication by a nonzero value is injective, so no
/// atoms merge and the probability multiset is unchanged.
inline DiscreteDist scale(const ExactScalar& c, const DiscreteDist& d) {
  if (c.is_zero()) fail(ErrorCode::degenerate, "degenerate scaling: factor is zero");
  if (c == ExactScalar(1)) return d;
  std::vector<Atom> atoms;
  atoms.reserve(d.size());
  for (const Atom& a : d.atoms()) atoms.push_back(Atom{c * a.value, a.prob});
  return DiscreteDist::trusted(std::move(atoms));
}

/// Distribution of X + Y for independent X ~ a, Y ~ b.
inline DiscreteDist convolve(const DiscreteDist& a, const DiscreteDist& b,
                             std::size_t budget = kDefaultAtomBudget) {
  if (a.is_deterministic() && a.atoms()[0].value.is_zero()) return b;
  if (b.is_deterministic() && b.atoms()[0].value.is_zero()) return a;
  detail::guard_sumset_size(a, b, budget);
  detail::AtomAccumulator acc(budget, a.size() * b.size());
  for (const Atom& x : a.atoms()) {
    for (const Atom& y : b.atoms()) acc.add(x.value + y.value, x.prob * y.prob);
  }
  return acc.finish();
}

/// Distribution of sum_j coeffs[j] * X_j with independent X_j ~ dists[j].
/// Terms with a zero coefficient are dropped.
inline DiscreteDist linear_combination(std::span<const ExactScalar> coeffs, std::span<const DiscreteDist> dists,
                                       std::size_t budget = kDefaultAtomBudget) {
  if (coeffs.size() != dists.size()) {
    fail(ErrorCode::invalid_argument, "linear_combination: " + std::to_string(coeffs.size()) + " coefficients for " +
                                          std::to_string(dists.size()) + " distributions");
  }
  std::optional<DiscreteDist> acc;
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    if (coeffs[j].is_zero()) continue;
    DiscreteDist term = scale(coeffs[j], dists[j]);
    acc = acc ? convolve(*acc, term, budget) : std::move(term);
  }
  if (!acc) fail(ErrorCode::degenerate, "degenerate combination: all coefficients are zero");
  return std::move(*acc);
}

namespace detail {

/// Neumaier-compensated sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// -sum p log2 p over a probability multiset, grouping equal probabilities so
/// the result depends only on the multiset (not on atom order).
inline double entropy_of_probabilities(std::vector<const Rational*> probs) {
  std::sort(probs.begin(), probs.end(), [](const Rational* a, const Rational* b) { return *a < *b; });
  CompensatedSum sum;
  for (std::size_t i = 0; i < probs.size();) {
    std::size_t j = i;
    while (j < probs.size() && *probs[j] == *probs[i]) ++j;
    const Rational& p = *probs[i];
    sum.add(-static_cast<double>(j - i) * p.to_double() * p.log2_abs());
    i = j;
  }
  return std::max(0.0, sum.value());
}

}  // namespace detail

/// Shannon entropy in bits, evaluated in double precision from the exact
/// probabilities.
inline double entropy_bits(const DiscreteDist& d) {
  std::vector<const Rational*> probs;
  probs.reserve(d.size());
  for (const Atom& a : d.atoms()) probs.push_back(&a.prob);
  return detail::entropy_of_probabilities(std::move(probs));
}

/// The support as a sorted, duplicate-free list.
inline std::vector<ExactScalar> support_set(const DiscreteDist& d) {
  std::vector<ExactScalar> out;
  out.reserve(d.size());
  for (const Atom& a : d.atoms()) out.push_back(a.value);
  return out;
}

}  // namespace icdof
