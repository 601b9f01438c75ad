#pragma once

#include <optional>
#include <string>
#include <vector>

#include "icdof/channel.hpp"
#include "icdof/exact_kernel.hpp"

namespace icdof {

enum class ConditionStatus { holds_up_to_bound, violated };

inline const char* to_string(ConditionStatus s) {
  return s == ConditionStatus::violated ? "violated" : "holds-up-to-bound";
}

struct WitnessTerm {
  std::string label;  // formal monomial, e.g. "h_1_1*h_1_2"
  BigInt coefficient;
  ExactScalar value;  // the monomial evaluated at H
};

/*
 * Finite check of the independence condition at degree d. For receiver i the
 * tested values are the monomials f(offdiag) of degree <= d+1 together with
 * h_ii * f(offdiag) for f of degree <= d. A violation carries an integer
 * combination of those values that is exactly zero.
 */
struct ConditionStarReport {
  ConditionStatus status = ConditionStatus::holds_up_to_bound;
  int degree = 0;
  std::optional<int> user;  // 1-based receiver whose family is dependent
  std::string family;       // "monomials", "diagonal-multiples" or "mixed"
  std::vector<WitnessTerm> witness;

  bool holds() const noexcept { return status == ConditionStatus::holds_up_to_bound; }

  /// Re-evaluates the witnessed combination; true iff it is exactly zero.
  bool witness_vanishes() const {
    if (witness.empty()) return false;
    ExactScalar sum;
    bool nontrivial = false;
    for (const WitnessTerm& t : witness) {
      if (t.coefficient == 0) continue;
      nontrivial = true;
      sum += t.value.scaled(Rational(t.coefficient));
    }
    return nontrivial && sum.is_zero();
  }

  std::string witness_str() const {
    std::string out;
    for (const WitnessTerm& t : witness) {
      if (t.coefficient == 0) continue;
      if (!out.empty()) out += t.coefficient < 0 ? " - " : " + ";
      else if (t.coefficient < 0) out += "-";
      out += BigInt(abs(t.coefficient)).str() + "*(" + t.label + ")";
    }
    return out + " = 0";
  }
};

namespace detail {

struct LabelledValues {
  std::vector<std::string> labels;
  std::vector<ExactScalar> values;
};

inline std::vector<WitnessTerm> witness_from(const LabelledValues& family, const std::vector<BigInt>& coeffs) {
  std::vector<WitnessTerm> out;
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    if (coeffs[j] != 0) out.push_back(WitnessTerm{family.labels[j], coeffs[j], family.values[j]});
  }
  return out;
}

}  // namespace detail

inline ConditionStarReport check_condition_star(const ChannelMatrix& H, int d) {
  if (d < 0) fail(ErrorCode::invalid_argument, "degree must be >= 0, got " + std::to_string(d));
  const std::vector<ExactScalar> offdiag = H.off_diagonal();
  const MonomialBasis upper = enumerate_monomials(H.K(), d + 1);
  const std::size_t lower_size = phi(H.K(), d).convert_to<std::size_t>();  // prefix of `upper`

  detail::LabelledValues monomials;
  for (std::size_t j = 0; j < upper.size(); ++j) {
    monomials.labels.push_back(upper.label(j));
    monomials.values.push_back(upper.evaluate(j, offdiag));
  }

  ConditionStarReport report;
  report.degree = d;
  auto violated = [&](int i, const char* family, const detail::LabelledValues& vals, const std::vector<BigInt>& c) {
    report.status = ConditionStatus::violated;
    report.user = i + 1;
    report.family = family;
    report.witness = detail::witness_from(vals, c);
    return report;
  };

  if (auto c = find_rational_dependency(monomials.values)) return violated(0, "monomials", monomials, *c);

  for (int i = 0; i < H.K(); ++i) {
    const ExactScalar& hii = H(i, i);
    const std::string diag = channel_generator(i, i).name();
    detail::LabelledValues multiples;
    for (std::size_t j = 0; j < lower_size; ++j) {
      const std::string& l = monomials.labels[j];
      multiples.labels.push_back(l == "1" ? diag : diag + "*" + l);
      multiples.values.push_back(hii * monomials.values[j]);
    }
    if (auto c = find_rational_dependency(multiples.values)) return violated(i, "diagonal-multiples", multiples, *c);

    detail::LabelledValues all = monomials;
    all.labels.insert(all.labels.end(), multiples.labels.begin(), multiples.labels.end());
    all.values.insert(all.values.end(), multiples.values.begin(), multiples.values.end());
    if (auto c = find_rational_dependency(all.values)) return violated(i, "mixed", all, *c);
  }
  return report;
}

}  // namespace icdof
