#pragma once

// Seeded random inputs for the property tests. Every generator draws from a
// caller-owned mt19937_64 so failures reproduce from the printed seed.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "icdof/icdof.hpp"

namespace gen {

using Rng = std::mt19937_64;

inline std::int64_t int_in(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

/// Mostly small rationals, sometimes near the 64-bit edge so the promotion
/// path gets exercised.
inline icdof::Rational rational(Rng& rng) {
  switch (int_in(rng, 0, 5)) {
    case 0: return icdof::Rational(int_in(rng, -1'000'000'000'000LL, 1'000'000'000'000LL), int_in(rng, 1, 1'000'000'000'000LL));
    case 1: return icdof::Rational(int_in(rng, INT64_MIN + 1, INT64_MAX), int_in(rng, 1, INT64_MAX));
    case 2: return icdof::Rational(int_in(rng, -3, 3));
    default: return icdof::Rational(int_in(rng, -50, 50), int_in(rng, 1, 30));
  }
}

inline icdof::Generator generator(Rng& rng) {
  static const char* names[] = {"x", "y", "z", "h_1_2", "h_2_1"};
  return icdof::Generator::named(names[int_in(rng, 0, 4)]);
}

/// Polynomial with up to `terms` terms of degree <= 3 in a few generators.
inline icdof::ExactScalar scalar(Rng& rng, int terms = 4) {
  icdof::ExactScalar out;
  const int n = static_cast<int>(int_in(rng, 0, terms));
  for (int t = 0; t < n; ++t) {
    icdof::ExactScalar term(icdof::Rational(int_in(rng, -9, 9), int_in(rng, 1, 6)));
    const int deg = static_cast<int>(int_in(rng, 0, 3));
    for (int k = 0; k < deg; ++k) term *= icdof::ExactScalar(generator(rng));
    out += term;
  }
  return out;
}

/// Random positive rational probabilities summing to exactly 1.
inline std::vector<icdof::Rational> probabilities(Rng& rng, std::size_t n) {
  std::vector<icdof::Rational> w;
  icdof::Rational total;
  for (std::size_t i = 0; i < n; ++i) {
    w.emplace_back(int_in(rng, 1, 1000), int_in(rng, 1, 40));
    total += w.back();
  }
  for (auto& x : w) x /= total;
  return w;
}

/// Distribution on distinct integers from [0, range).
inline icdof::DiscreteDist int_dist(Rng& rng, std::size_t max_support, std::int64_t range) {
  const auto cap = std::min(static_cast<std::int64_t>(max_support), range);
  const std::size_t n = static_cast<std::size_t>(int_in(rng, 1, cap));
  std::vector<std::int64_t> pts;
  while (pts.size() < n) {
    const std::int64_t v = int_in(rng, 0, range - 1);
    if (std::find(pts.begin(), pts.end(), v) == pts.end()) pts.push_back(v);
  }
  const auto p = probabilities(rng, n);
  std::vector<icdof::Atom> atoms;
  for (std::size_t i = 0; i < n; ++i) atoms.push_back(icdof::Atom{icdof::ExactScalar(pts[i]), p[i]});
  return icdof::DiscreteDist::from_atoms(std::move(atoms));
}

/// Distribution on distinct random symbolic values.
inline icdof::DiscreteDist symbolic_dist(Rng& rng, std::size_t max_support) {
  const std::size_t n = static_cast<std::size_t>(int_in(rng, 1, static_cast<std::int64_t>(max_support)));
  std::vector<icdof::ExactScalar> pts;
  while (pts.size() < n) {
    icdof::ExactScalar v = scalar(rng, 3);
    if (std::find(pts.begin(), pts.end(), v) == pts.end()) pts.push_back(std::move(v));
  }
  const auto p = probabilities(rng, n);
  std::vector<icdof::Atom> atoms;
  for (std::size_t i = 0; i < n; ++i) atoms.push_back(icdof::Atom{pts[i], p[i]});
  return icdof::DiscreteDist::from_atoms(std::move(atoms));
}

inline icdof::FiniteSet int_set(Rng& rng, std::size_t max_size, std::int64_t lo, std::int64_t hi) {
  const std::size_t n = static_cast<std::size_t>(int_in(rng, 1, static_cast<std::int64_t>(max_size)));
  std::vector<icdof::ExactScalar> v;
  for (std::size_t i = 0; i < n; ++i) v.emplace_back(int_in(rng, lo, hi));
  return icdof::FiniteSet(std::move(v));
}

inline icdof::FiniteSet symbolic_set(Rng& rng, std::size_t max_size) {
  const std::size_t n = static_cast<std::size_t>(int_in(rng, 1, static_cast<std::int64_t>(max_size)));
  std::vector<icdof::ExactScalar> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(scalar(rng, 3));
  return icdof::FiniteSet(std::move(v));
}

/// Plain double entropy of a probability vector; an oracle independent of
/// the grouped, compensated sum in the library.
inline double naive_entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p) {
    if (x > 0) h -= x * std::log2(x);
  }
  return h;
}

}  // namespace gen
