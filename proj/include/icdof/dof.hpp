#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "icdof/channel.hpp"
#include "icdof/condition_star.hpp"
#include "icdof/discrete_dist.hpp"
#include "icdof/error.hpp"

namespace icdof {

/// Entropy terms of one receiver: H(sum_j h_ij W_j), H(sum_{j != i} h_ij W_j)
/// and min{full/r_log, 1} - min{interference/r_log, 1}.
struct UserTerm {
  double full_entropy = 0.0;
  double interference_entropy = 0.0;
  double clamped = 0.0;
};

using ParamValue = std::variant<std::int64_t, double, std::string>;

/*
 * A DoF lower bound. Bounds obtained through the contraction parameter r hold
 * for r outside an exceptional set that cannot be computed but misses points
 * of every interval, hence the caveat.
 */
struct BoundReport {
  double bound = 0.0;
  std::vector<UserTerm> per_user;
  double r_log = 0.0;  // log2(1/r)
  std::string caveat = "non-exceptional-r";
  std::vector<std::pair<std::string, ParamValue>> params;

  std::string route;                  // how entropies were obtained: "enumerate" or "factored"
  std::optional<bool> split_exact;    // entropy split H(full) = H(desired) + H(interference) checked
  std::optional<double> either_rhs;   // per-user lower bound valid for every user
  std::optional<double> floor;        // closed-form non-asymptotic bound
  std::optional<double> closed_form;  // closed form of the integer example
};

inline constexpr double kSplitTolerance = 1e-12;

namespace detail {

/// H(sum_j coeffs[j] X_j); an all-zero combination is the constant 0.
inline double combination_entropy(std::span<const ExactScalar> coeffs, std::span<const DiscreteDist> dists,
                                  std::size_t budget) {
  if (std::all_of(coeffs.begin(), coeffs.end(), [](const ExactScalar& c) { return c.is_zero(); })) return 0.0;
  return entropy_bits(linear_combination(coeffs, dists, budget));
}

inline double clamp_ratio(double h, double r_log) { return std::min(h / r_log, 1.0); }

inline UserTerm user_term(double full, double interference, double r_log) {
  const double t = clamp_ratio(full, r_log) - clamp_ratio(interference, r_log);
  return UserTerm{full, interference, std::clamp(t, 0.0, 1.0)};
}

inline void finish(BoundReport& report) {
  report.bound = 0.0;
  for (const UserTerm& t : report.per_user) report.bound += t.clamped;
}

inline std::vector<ExactScalar> row_of(const ChannelMatrix& H, int i, bool skip_diagonal) {
  std::vector<ExactScalar> c;
  for (int j = 0; j < H.K(); ++j) c.push_back(skip_diagonal && j == i ? ExactScalar() : H(i, j));
  return c;
}

}  // namespace detail

/// sum_i [min{H(sum_j h_ij W_j)/r_log, 1} - min{H(sum_{j!=i} h_ij W_j)/r_log, 1}]
/// for independent W_j.
inline BoundReport prop1_bound(const ChannelMatrix& H, std::span<const DiscreteDist> W, double r_log,
                               std::size_t budget = kDefaultAtomBudget) {
  if (W.size() != static_cast<std::size_t>(H.K())) {
    fail(ErrorCode::invalid_argument, "expected " + std::to_string(H.K()) + " input distributions, got " +
                                          std::to_string(W.size()));
  }
  if (!(r_log > 0.0) || !std::isfinite(r_log)) fail(ErrorCode::invalid_argument, "r_log must be positive");
  BoundReport report;
  report.r_log = r_log;
  report.params.emplace_back("K", std::int64_t{H.K()});
  report.params.emplace_back("r_log", r_log);
  for (int i = 0; i < H.K(); ++i) {
    const double full = detail::combination_entropy(detail::row_of(H, i, false), W, budget);
    const double interference = detail::combination_entropy(detail::row_of(H, i, true), W, budget);
    report.per_user.push_back(detail::user_term(full, interference, r_log));
  }
  detail::finish(report);
  return report;
}

/// K/2 [2 - (K(K-1)+d+1) log((K-1)N) / ((d+1) log N)], unclamped.
inline double nonasymptotic_floor(int K, int d, const BigInt& N) {
  if (K < 2 || d < 0) fail(ErrorCode::invalid_argument, "floor needs K >= 2 and d >= 0");
  if (N < 2) fail(ErrorCode::invalid_argument, "floor needs N >= 2 (log N = 0 otherwise)");
  const double ratio = static_cast<double>(K * (K - 1) + d + 1) / static_cast<double>(d + 1);
  const double logs = detail::log2_big(BigInt(K - 1) * N) / detail::log2_big(N);
  return K / 2.0 * (2.0 - ratio * logs);
}

/// Raised by theorem1_certified_bound when the independence check fails.
class ConditionViolation : public Error {
 public:
  explicit ConditionViolation(ConditionStarReport report)
      : Error(ErrorCode::condition_violated,
              "independence condition violated at degree " + std::to_string(report.degree) + " for user " +
                  std::to_string(report.user.value_or(0)) + " (" + report.family + "): " + report.witness_str()),
        report_(std::move(report)) {}
  const ConditionStarReport& report() const noexcept { return report_; }

 private:
  ConditionStarReport report_;
};

enum class EntropyRoute { automatic, enumerate, factored };

namespace detail {

/*
 * Interference at receiver i is sum_{j != i} sum_k a_jk h_ij f_k with the
 * a_jk iid uniform on {1..N}. Grouping the products h_ij f_k by formal
 * monomial m gives coefficients c_m = sum of n_m of the a_jk. Once the
 * monomials of degree <= d+1 are certified independent, the value determines
 * every c_m, and distinct m use disjoint a_jk, so the entropy is
 * sum_m H(c_m).
 */
inline std::vector<int> interference_multiplicities(const MonomialBasis& basis, int i) {
  const int K = basis.K;
  std::map<std::vector<std::uint32_t>, int> count;
  for (int j = 0; j < K; ++j) {
    if (j == i) continue;
    const std::size_t var = static_cast<std::size_t>(i) * (K - 1) + (j < i ? j : j - 1);
    for (const auto& ex : basis.exponents) {
      auto e = ex;
      ++e[var];
      ++count[e];
    }
  }
  std::vector<int> out;
  for (const auto& [e, n] : count) out.push_back(n);
  return out;
}

/// H(A_1 + ... + A_n) for iid A uniform on {1..N}.
inline double iid_uniform_sum_entropy(int n, int N) {
  std::vector<ExactScalar> pts;
  for (int a = 1; a <= N; ++a) pts.emplace_back(a);
  const DiscreteDist u = uniform_on(pts);
  DiscreteDist s = u;
  for (int k = 1; k < n; ++k) s = convolve(s, u);
  return entropy_bits(s);
}

}  // namespace detail

/*
 * The construction of the K/2 achievability proof: W_j iid uniform on W_N,
 * r = |W_N|^-2. Requires the independence check at degree d to pass and H to
 * be fully connected. Entropies are enumerated exactly when the full
 * distribution fits in the budget and otherwise computed from the monomial
 * multiplicities (valid because the check passed).
 */
inline BoundReport theorem1_certified_bound(const ChannelMatrix& H, int d, int N,
                                            std::size_t budget = kDefaultAtomBudget,
                                            EntropyRoute route = EntropyRoute::automatic) {
  if (N < 2) fail(ErrorCode::invalid_argument, "N must be >= 2 (log N = 0), got " + std::to_string(N));
  if (d < 0) fail(ErrorCode::invalid_argument, "degree must be >= 0, got " + std::to_string(d));
  if (!is_fully_connected(H)) fail(ErrorCode::invalid_argument, "channel is not fully connected");
  ConditionStarReport cond = check_condition_star(H, d);
  if (!cond.holds()) throw ConditionViolation(std::move(cond));

  const int K = H.K();
  const MonomialBasis basis = enumerate_monomials(K, d);
  const double phi_d = static_cast<double>(basis.size());
  const double log_n = std::log2(static_cast<double>(N));
  const double desired_entropy = phi_d * log_n;

  BoundReport report;
  report.r_log = 2.0 * desired_entropy;
  report.params.emplace_back("K", std::int64_t{K});
  report.params.emplace_back("d", std::int64_t{d});
  report.params.emplace_back("N", std::int64_t{N});

  // Support sizes under the certified independence.
  std::vector<std::vector<int>> mult(K);
  bool fits = true;
  const BigInt wn_size = boost::multiprecision::pow(BigInt(N), static_cast<unsigned>(basis.size()));
  for (int i = 0; i < K; ++i) {
    mult[i] = detail::interference_multiplicities(basis, i);
    BigInt interference_size = 1;
    for (int n : mult[i]) interference_size *= BigInt(n) * (N - 1) + 1;
    if (wn_size * interference_size > BigInt(budget)) fits = false;
  }
  if (route == EntropyRoute::automatic) route = fits ? EntropyRoute::enumerate : EntropyRoute::factored;

  if (route == EntropyRoute::enumerate) {
    report.route = "enumerate";
    const DiscreteDist w = uniform_on(build_wn(H, d, N, budget));
    const std::vector<DiscreteDist> W(K, w);
    bool exact = true;
    for (int i = 0; i < K; ++i) {
      const DiscreteDist interference = linear_combination(detail::row_of(H, i, true), W, budget);
      const DiscreteDist desired = scale(H(i, i), w);
      const DiscreteDist full = convolve(desired, interference, budget);
      const double h_int = entropy_bits(interference);
      const double h_des = entropy_bits(desired);
      const double h_full = entropy_bits(full);
      exact = exact && full.size() == desired.size() * interference.size() &&
              std::abs(h_full - h_des - h_int) <= kSplitTolerance;
      report.per_user.push_back(detail::user_term(h_full, h_int, report.r_log));
    }
    report.split_exact = exact;
  } else {
    report.route = "factored";
    std::map<int, double> sum_entropy;
    for (int i = 0; i < K; ++i) {
      detail::CompensatedSum h_int;
      for (int n : mult[i]) {
        auto it = sum_entropy.find(n);
        if (it == sum_entropy.end()) it = sum_entropy.emplace(n, detail::iid_uniform_sum_entropy(n, N)).first;
        h_int.add(it->second);
      }
      report.per_user.push_back(detail::user_term(desired_entropy + h_int.value(), h_int.value(), report.r_log));
    }
    report.split_exact = true;  // holds by the certified independence
  }

  const double ratio = phi(K, d + 1).convert_to<double>() / phi_d;
  report.either_rhs = 1.0 - ratio * std::log2(static_cast<double>(K - 1) * N) / (2.0 * log_n);
  report.floor = nonasymptotic_floor(K, d, BigInt(N));
  detail::finish(report);
  return report;
}

/*
 * The example class with irrational diagonal and nonzero integer
 * off-diagonal entries: diagonal entries become generators g_1..g_K, inputs
 * are iid uniform on {0..N-1} and log(1/r) = 2 log(2 h_max K N).
 */
inline BoundReport integer_example_bound(int K, const std::vector<std::vector<std::int64_t>>& offdiag, int N,
                                         std::size_t budget = kDefaultAtomBudget) {
  if (K < 2) fail(ErrorCode::invalid_argument, "K must be >= 2");
  if (N < 1) fail(ErrorCode::invalid_argument, "N must be >= 1");
  if (offdiag.size() != static_cast<std::size_t>(K)) fail(ErrorCode::invalid_argument, "off-diagonal matrix must be K x K");
  std::int64_t h_max = 0;
  std::vector<ExactScalar> entries;
  for (int i = 0; i < K; ++i) {
    if (offdiag[i].size() != static_cast<std::size_t>(K)) fail(ErrorCode::invalid_argument, "off-diagonal matrix must be K x K");
    for (int j = 0; j < K; ++j) {
      if (i == j) {
        entries.emplace_back(Generator::named("g" + std::to_string(i + 1)));
        continue;
      }
      const std::int64_t h = offdiag[i][j];
      if (h == 0) {
        fail(ErrorCode::invalid_argument, "off-diagonal entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                              ") is zero");
      }
      h_max = std::max(h_max, h < 0 ? -h : h);
      entries.emplace_back(h);
    }
  }
  const ChannelMatrix H(K, std::move(entries));
  std::vector<ExactScalar> pts;
  for (int a = 0; a < N; ++a) pts.emplace_back(a);
  const DiscreteDist w = uniform_on(pts);
  const std::vector<DiscreteDist> W(K, w);
  const double scale_log = std::log2(2.0 * static_cast<double>(h_max) * K * N);

  BoundReport report;
  report.r_log = 2.0 * scale_log;
  report.route = "enumerate";
  report.params.emplace_back("K", std::int64_t{K});
  report.params.emplace_back("N", std::int64_t{N});
  report.params.emplace_back("h_max", h_max);
  bool exact = true;
  for (int i = 0; i < K; ++i) {
    const DiscreteDist interference = linear_combination(detail::row_of(H, i, true), W, budget);
    const DiscreteDist desired = scale(H(i, i), w);
    const DiscreteDist full = convolve(desired, interference, budget);
    const double h_int = entropy_bits(interference);
    const double h_des = entropy_bits(desired);
    const double h_full = entropy_bits(full);
    exact = exact && full.size() == desired.size() * interference.size() &&
            std::abs(h_full - h_des - h_int) <= kSplitTolerance;
    report.per_user.push_back(detail::user_term(h_full, h_int, report.r_log));
  }
  report.split_exact = exact;
  report.closed_form = N >= 2 ? K * std::log2(static_cast<double>(N)) / report.r_log : 0.0;
  detail::finish(report);
  return report;
}

/// sum_i [H(sum_j h_ij W_j) - H(sum_{j!=i} h_ij W_j)] / max_i H(sum_j h_ij W_j).
inline double theorem3_ratio(const ChannelMatrix& H, std::span<const DiscreteDist> W,
                             std::size_t budget = kDefaultAtomBudget) {
  if (W.size() != static_cast<std::size_t>(H.K())) {
    fail(ErrorCode::invalid_argument, "expected " + std::to_string(H.K()) + " input distributions, got " +
                                          std::to_string(W.size()));
  }
  double numerator = 0.0;
  double denominator = 0.0;
  for (int i = 0; i < H.K(); ++i) {
    const double full = detail::combination_entropy(detail::row_of(H, i, false), W, budget);
    const double interference = detail::combination_entropy(detail::row_of(H, i, true), W, budget);
    numerator += full - interference;
    denominator = std::max(denominator, full);
  }
  if (denominator <= 0.0) fail(ErrorCode::degenerate, "deterministic inputs: every receiver sees zero entropy");
  return numerator / denominator;
}

/// 2 - H(U+V)/H(U+lambda V).
inline double hlambda_bound(const Rational& lambda, const DiscreteDist& U, const DiscreteDist& V,
                            std::size_t budget = kDefaultAtomBudget) {
  if (lambda.is_zero()) fail(ErrorCode::invalid_argument, "lambda must be nonzero");
  const double den = entropy_bits(convolve(U, scale(ExactScalar(lambda), V), budget));
  if (den <= 0.0) fail(ErrorCode::degenerate, "deterministic inputs: H(U + lambda V) = 0");
  const double num = entropy_bits(convolve(U, V, budget));
  return 2.0 - num / den;
}

}  // namespace icdof
