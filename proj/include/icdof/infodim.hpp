#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "icdof/discrete_dist.hpp"
#include "icdof/error.hpp"

namespace icdof {

/// Self-similar measure of the maps x -> r x + w_i chosen with probabilities p_i.
struct IFSSpec {
  Rational r;
  std::vector<ExactScalar> w;
  std::vector<Rational> probs;

  void validate() const {
    if (!(r.sign() > 0 && r < Rational(1))) fail(ErrorCode::invalid_argument, "contraction r must lie in (0, 1), got " + r.str());
    if (w.size() != probs.size()) fail(ErrorCode::invalid_argument, "IFS needs one probability per w value");
    if (w.size() < 2) fail(ErrorCode::invalid_argument, "IFS needs at least two maps");
    (void)distribution();
  }

  /// The distribution of W (validates probabilities and distinctness).
  DiscreteDist distribution() const {
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < w.size(); ++i) atoms.push_back(Atom{w[i], probs[i]});
    return DiscreteDist::from_atoms(std::move(atoms));
  }
};

inline constexpr const char* kFormulaCaveat = "valid for non-exceptional r";

/// min{H(W) / log2(1/r), 1}.
inline double infodim_formula(const IFSSpec& ifs) {
  ifs.validate();
  const double r_log = -ifs.r.log2_abs();
  return std::min(entropy_bits(ifs.distribution()) / r_log, 1.0);
}

/// Distribution of sum_{k<m} r^k W_k with W_k iid, folded as W + r(W + r(...)).
inline DiscreteDist truncated_dist(const IFSSpec& ifs, int m, std::size_t budget = kDefaultAtomBudget) {
  ifs.validate();
  if (m < 1) fail(ErrorCode::invalid_argument, "truncation depth m must be >= 1, got " + std::to_string(m));
  const DiscreteDist w = ifs.distribution();
  const ExactScalar r(ifs.r);
  DiscreteDist x = w;
  for (int k = 1; k < m; ++k) x = convolve(w, scale(r, x), budget);
  return x;
}

struct InfodimEstimate {
  double value = 0.0;      // one-period increment estimate
  double raw_ratio = 0.0;  // H(floor(k X_m)) / log2 k
  bool guard_ok = true;
  std::vector<std::string> flags;
};

namespace detail {

/// H(floor(scale * X)) for a distribution on rationals.
inline double quantized_entropy(const DiscreteDist& x, const Rational& scale) {
  std::vector<std::pair<BigInt, Rational>> cells;
  cells.reserve(x.size());
  for (const Atom& a : x.atoms()) cells.emplace_back((scale * *a.value.as_rational()).floor(), a.prob);
  std::sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Rational> merged;
  for (std::size_t i = 0; i < cells.size();) {
    Rational p = cells[i].second;
    std::size_t j = i + 1;
    for (; j < cells.size() && cells[j].first == cells[i].first; ++j) p += cells[j].second;
    merged.push_back(std::move(p));
    i = j;
  }
  std::vector<const Rational*> ptrs;
  for (const Rational& p : merged) ptrs.push_back(&p);
  return entropy_of_probabilities(std::move(ptrs));
}

}  // namespace detail

/*
 * Estimates the information dimension from the m-term truncation. H(floor(kX))
 * grows like dim * log2 k plus a bounded offset that does not vanish at any
 * finite k, so the estimate divides the growth over one contraction period,
 * [H(floor((k/r) X)) - H(floor(k X))] / log2(1/r), which cancels the offset
 * for self-similar measures. The plain ratio is reported alongside.
 *
 * The truncation tail is at most r^m max|w| / (1 - r); the guard asks that it
 * stay below one cell at the finer scale k/r.
 */
inline InfodimEstimate empirical_infodim(const IFSSpec& ifs, int m, std::int64_t k,
                                         std::size_t budget = kDefaultAtomBudget) {
  ifs.validate();
  if (k < 2) fail(ErrorCode::invalid_argument, "quantization scale k must be >= 2, got " + std::to_string(k));
  Rational max_w;
  for (const ExactScalar& v : ifs.w) max_w = std::max(max_w, require_rational(v, "empirical information dimension").abs());
  const DiscreteDist x = truncated_dist(ifs, m, budget);

  const Rational coarse(k);
  const Rational fine = coarse / ifs.r;
  Rational r_pow_m(1);
  for (int i = 0; i < m; ++i) r_pow_m *= ifs.r;
  const Rational tail = fine * r_pow_m * max_w / (Rational(1) - ifs.r);

  const double h_coarse = detail::quantized_entropy(x, coarse);
  const double h_fine = detail::quantized_entropy(x, fine);
  InfodimEstimate out;
  out.value = (h_fine - h_coarse) / -ifs.r.log2_abs();
  out.raw_ratio = h_coarse / std::log2(static_cast<double>(k));
  out.guard_ok = tail <= Rational(1);
  out.flags.emplace_back("lower-upper-indistinguishable");
  if (!out.guard_ok) out.flags.emplace_back("guard-violated");
  return out;
}

}  // namespace icdof
