#pragma once

#include <algorithm>
#include <optional>
#include <unordered_set>
#include <utility>
#include <vector>

#include "icdof/discrete_dist.hpp"
#include "icdof/error.hpp"

namespace icdof {

/// Finite set of exact values, kept sorted and free of duplicates.
class FiniteSet {
 public:
  FiniteSet() = default;
  explicit FiniteSet(std::vector<ExactScalar> elements) : elements_(std::move(elements)) {
    std::sort(elements_.begin(), elements_.end());
    elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
  }

  const std::vector<ExactScalar>& elements() const noexcept { return elements_; }
  std::size_t size() const noexcept { return elements_.size(); }
  bool empty() const noexcept { return elements_.empty(); }
  bool contains(const ExactScalar& x) const { return std::binary_search(elements_.begin(), elements_.end(), x); }

  friend bool operator==(const FiniteSet&, const FiniteSet&) = default;

 private:
  std::vector<ExactScalar> elements_;
};

inline FiniteSet support_of(const DiscreteDist& d) { return FiniteSet(support_set(d)); }

/// {a + b : a in A, b in B}.
inline FiniteSet sumset(const FiniteSet& a, const FiniteSet& b, std::size_t budget = kDefaultAtomBudget) {
  if (a.empty() || b.empty()) fail(ErrorCode::invalid_argument, "sumset needs non-empty sets");
  std::unordered_set<ExactScalar> out;
  for (const ExactScalar& x : a.elements()) {
    for (const ExactScalar& y : b.elements()) {
      out.insert(x + y);
      if (out.size() > budget) detail::budget_exceeded(budget);
    }
  }
  return FiniteSet(std::vector<ExactScalar>(out.begin(), out.end()));
}

/// {a - b}, computed as A + (-1)B.
inline FiniteSet difference_set(const FiniteSet& a, const FiniteSet& b, std::size_t budget = kDefaultAtomBudget) {
  std::vector<ExactScalar> neg;
  for (const ExactScalar& y : b.elements()) neg.push_back(-y);
  return sumset(a, FiniteSet(std::move(neg)), budget);
}

struct TrivialBounds {
  bool lower_ok = false;  // max(|A|, |B|) <= |A + B|
  bool upper_ok = false;  // |A + B| <= |A| |B|
  std::size_t sum_size = 0;
};

inline TrivialBounds check_trivial_bounds(const FiniteSet& a, const FiniteSet& b) {
  const std::size_t s = sumset(a, b).size();
  return TrivialBounds{std::max(a.size(), b.size()) <= s, s <= a.size() * b.size(), s};
}

/// {start, start + step, ..., start + (length-1) step}; step is empty for a singleton.
struct Progression {
  Rational start;
  std::optional<Rational> step;
  std::size_t length = 0;
};

inline std::optional<Progression> is_arithmetic_progression(const FiniteSet& a) {
  if (a.empty()) fail(ErrorCode::invalid_argument, "empty set");
  std::vector<Rational> v;
  for (const ExactScalar& x : a.elements()) v.push_back(require_rational(x, "arithmetic progression test"));
  std::sort(v.begin(), v.end());
  if (v.size() == 1) return Progression{v[0], std::nullopt, 1};
  const Rational step = v[1] - v[0];
  for (std::size_t i = 2; i < v.size(); ++i) {
    if (v[i] - v[i - 1] != step) return std::nullopt;
  }
  return Progression{v[0], step, v.size()};
}

/*
 * Slacks (right side minus left side) of
 *   recall1:        H(U+V) + H(U) + H(V) <= 3 H(U-V)
 *   recall2:        H(U-V) <= H(U+V)/2 + 2/3 (H(U) + H(V))
 *   sum_difference: H(U-V) <= 3 H(U+V) - H(U) - H(V)
 *   combined:       5/3 H(U-V) <= 5/2 H(U+V)   (2/3 sum_difference + recall2)
 * for independent U, V.
 */
struct InequalityReport {
  double h_u = 0.0;
  double h_v = 0.0;
  double h_sum = 0.0;
  double h_diff = 0.0;
  double recall1 = 0.0;
  double recall2 = 0.0;
  double sum_difference = 0.0;
  double combined = 0.0;

  double min_slack() const { return std::min({recall1, recall2, sum_difference, combined}); }
};

inline InequalityReport entropy_inequality_suite(const DiscreteDist& u, const DiscreteDist& v,
                                                 std::size_t budget = kDefaultAtomBudget) {
  InequalityReport r;
  r.h_u = entropy_bits(u);
  r.h_v = entropy_bits(v);
  r.h_sum = entropy_bits(convolve(u, v, budget));
  r.h_diff = entropy_bits(convolve(u, scale(ExactScalar(-1), v), budget));
  r.recall1 = 3.0 * r.h_diff - (r.h_sum + r.h_u + r.h_v);
  r.recall2 = 0.5 * r.h_sum + 2.0 / 3.0 * (r.h_u + r.h_v) - r.h_diff;
  r.sum_difference = 3.0 * r.h_sum - r.h_u - r.h_v - r.h_diff;
  r.combined = 2.5 * r.h_sum - 5.0 / 3.0 * r.h_diff;
  return r;
}

}  // namespace icdof
