#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <thread>
#include <utility>
#include <vector>

#include "icdof/channel.hpp"
#include "icdof/discrete_dist.hpp"
#include "icdof/dof.hpp"

namespace icdof {

struct OptConfig {
  int restarts = 8;
  int max_iters = 300;
  std::uint64_t seed = 1;
  std::int64_t max_denominator = 1'000'000;
  unsigned threads = 1;
  std::size_t budget = kDefaultAtomBudget;
};

struct TraceEntry {
  int restart = 0;
  int iterations = 0;
  int evaluations = 0;
  double start_value = 0.0;
  double best_value = 0.0;
};

/// best holds the winning distributions: (U, V) for the H_lambda objective,
/// (W_1, ..., W_K) for the Theorem-3 ratio.
struct OptResult {
  double best_value = -std::numeric_limits<double>::infinity();
  std::vector<DiscreteDist> best;
  int best_restart = -1;
  std::vector<TraceEntry> trace;
  std::uint64_t seed = 0;

  const DiscreteDist& best_U() const { return best.at(0); }
  const DiscreteDist& best_V() const { return best.at(1); }
};

/// Continued-fraction approximation of x > 0 with denominator <= max_den,
/// never returning zero.
inline Rational rationalize(double x, std::int64_t max_den) {
  if (!(x > 0.0) || !std::isfinite(x)) fail(ErrorCode::invalid_argument, "rationalize needs a positive finite value");
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double v = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double a_d = std::floor(v);
    if (a_d > 1e15) break;
    const auto a = static_cast<std::int64_t>(a_d);
    const std::int64_t q2 = a * q1 + q0;
    if (q2 > max_den) break;
    const std::int64_t p2 = a * p1 + p0;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const double frac = v - a_d;
    if (frac < 1e-15) break;
    v = 1.0 / frac;
  }
  if (q1 == 0 || p1 <= 0) return Rational(1, max_den);
  return Rational(p1, q1);
}

/// Distribution on {0, ..., n-1} with probabilities proportional to
/// exp(log_weights), rationalized and normalized exactly.
inline DiscreteDist dist_from_log_weights(const std::vector<double>& log_weights, std::int64_t max_den) {
  const double top = *std::max_element(log_weights.begin(), log_weights.end());
  double total = 0.0;
  std::vector<double> w;
  for (double x : log_weights) {
    w.push_back(std::exp(x - top));
    total += w.back();
  }
  std::vector<Rational> q;
  Rational sum;
  for (double x : w) {
    q.push_back(rationalize(x / total, max_den));
    sum += q.back();
  }
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < q.size(); ++i) atoms.push_back(Atom{ExactScalar(static_cast<std::int64_t>(i)), q[i] / sum});
  return DiscreteDist::from_atoms(std::move(atoms));
}

/// The lower-bound pair on {0,1,2,3}: P(0) = 0.08^3, P(1) = 0.08^2, P(2) = 0.08.
inline DiscreteDist prop4_distribution() {
  const Rational a(2, 25);
  std::vector<Atom> atoms{{0, a * a * a}, {1, a * a}, {2, a}, {3, Rational(1) - a - a * a - a * a * a}};
  return DiscreteDist::from_atoms(std::move(atoms));
}

namespace detail {

using Point = std::vector<double>;
using Objective = std::function<double(const Point&)>;  // -inf for inadmissible points

struct SearchOutcome {
  double value = -std::numeric_limits<double>::infinity();
  Point x;
  int iterations = 0;
  int evaluations = 0;
};

/// Nelder-Mead maximization from x0 with an axis-aligned initial simplex.
inline SearchOutcome nelder_mead_max(const Objective& f, const Point& x0, int max_iters, double step = 1.0) {
  const std::size_t n = x0.size();
  SearchOutcome out;
  auto eval = [&](const Point& x) {
    ++out.evaluations;
    return f(x);
  };
  std::vector<Point> simplex{x0};
  for (std::size_t i = 0; i < n; ++i) {
    Point x = x0;
    x[i] += step;
    simplex.push_back(std::move(x));
  }
  std::vector<double> val;
  for (const Point& x : simplex) val.push_back(eval(x));

  std::vector<std::size_t> order(n + 1);
  for (out.iterations = 0; out.iterations < max_iters; ++out.iterations) {
    for (std::size_t i = 0; i <= n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return val[a] > val[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];
    if (std::isfinite(val[worst]) && val[best] - val[worst] < 1e-13) break;

    Point centroid(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[order[k]][i] / static_cast<double>(n);
    }
    auto along = [&](double t) {
      Point x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = centroid[i] + t * (simplex[worst][i] - centroid[i]);
      return x;
    };
    Point xr = along(-1.0);
    const double fr = eval(xr);
    if (fr > val[best]) {
      Point xe = along(-2.0);
      const double fe = eval(xe);
      if (fe > fr) {
        simplex[worst] = std::move(xe);
        val[worst] = fe;
      } else {
        simplex[worst] = std::move(xr);
        val[worst] = fr;
      }
      continue;
    }
    if (fr > val[second]) {
      simplex[worst] = std::move(xr);
      val[worst] = fr;
      continue;
    }
    const bool outside = fr > val[worst];
    Point xc = along(outside ? -0.5 : 0.5);
    const double fc = eval(xc);
    if (fc > (outside ? fr : val[worst])) {
      simplex[worst] = std::move(xc);
      val[worst] = fc;
      continue;
    }
    for (std::size_t k = 1; k <= n; ++k) {
      Point& x = simplex[order[k]];
      for (std::size_t i = 0; i < n; ++i) x[i] = simplex[best][i] + 0.5 * (x[i] - simplex[best][i]);
      val[order[k]] = eval(x);
    }
  }
  const auto it = std::max_element(val.begin(), val.end());
  out.value = *it;
  out.x = simplex[static_cast<std::size_t>(it - val.begin())];
  return out;
}

struct RestartResult {
  double value = -std::numeric_limits<double>::infinity();
  std::vector<DiscreteDist> dists;
  TraceEntry trace;
};

/*
 * Shared restart driver. blocks[b] is the support size of the b-th
 * distribution; a point is the concatenation of their log-weights. Restart r
 * starts from warm[r] when given, otherwise from a point drawn with a
 * generator seeded by (seed, r), so results do not depend on thread count.
 * `objective` scores a list of distributions exactly and throws Error for
 * inadmissible ones.
 */
inline OptResult run_restarts(const std::vector<int>& blocks, const OptConfig& config,
                              const std::vector<Point>& warm,
                              const std::function<double(const std::vector<DiscreteDist>&)>& objective,
                              const std::vector<std::vector<DiscreteDist>>& seeded_candidates = {}) {
  std::size_t dim = 0;
  for (int b : blocks) dim += static_cast<std::size_t>(b);
  auto to_dists = [&](const Point& x) {
    std::vector<DiscreteDist> out;
    std::size_t off = 0;
    for (int b : blocks) {
      out.push_back(dist_from_log_weights(Point(x.begin() + off, x.begin() + off + b), config.max_denominator));
      off += static_cast<std::size_t>(b);
    }
    return out;
  };
  auto score = [&](const std::vector<DiscreteDist>& d) {
    try {
      return objective(d);
    } catch (const Error&) {
      return -std::numeric_limits<double>::infinity();
    }
  };

  const int restarts = std::max(config.restarts, static_cast<int>(warm.size()));
  std::vector<RestartResult> results(static_cast<std::size_t>(restarts));
  auto run_one = [&](int r) {
    Point x0;
    if (static_cast<std::size_t>(r) < warm.size()) {
      x0 = warm[r];
    } else {
      std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                        static_cast<std::uint32_t>(r)};
      std::mt19937_64 rng(seq);
      std::uniform_real_distribution<double> u(-3.0, 3.0);
      for (std::size_t i = 0; i < dim; ++i) x0.push_back(u(rng));
    }
    const Objective f = [&](const Point& x) { return score(to_dists(x)); };
    const SearchOutcome s = nelder_mead_max(f, x0, config.max_iters);
    RestartResult& res = results[static_cast<std::size_t>(r)];
    res.trace = TraceEntry{r, s.iterations, s.evaluations, f(x0), s.value};
    if (std::isfinite(s.value)) {
      res.dists = to_dists(s.x);
      res.value = score(res.dists);
    }
    if (static_cast<std::size_t>(r) < seeded_candidates.size()) {
      const double v = score(seeded_candidates[r]);
      if (v > res.value) {
        res.value = v;
        res.dists = seeded_candidates[r];
      }
    }
    res.trace.best_value = res.value;
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(restarts)));
  if (threads == 1) {
    for (int r = 0; r < restarts; ++r) run_one(r);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (int r = next++; r < restarts; r = next++) run_one(r);
      });
    }
    for (std::thread& t : pool) t.join();
  }

  OptResult out;
  out.seed = config.seed;
  for (int r = 0; r < restarts; ++r) {
    RestartResult& res = results[static_cast<std::size_t>(r)];
    out.trace.push_back(res.trace);
    if (res.value > out.best_value) {
      out.best_value = res.value;
      out.best = std::move(res.dists);
      out.best_restart = r;
    }
  }
  return out;
}

inline Point log_weights_of(const DiscreteDist& d, int n) {
  Point x(static_cast<std::size_t>(n), std::log(1e-9));
  for (const Atom& a : d.atoms()) {
    const auto v = a.value.as_rational();
    if (!v || !v->is_integer() || v->sign() < 0 || *v >= Rational(n)) continue;
    x[v->numerator().convert_to<std::size_t>()] = std::log(a.prob.to_double());
  }
  return x;
}

}  // namespace detail

/*
 * Maximizes 2 - H(U+V)/H(U+lambda V) over U, V on {0..n-1}. For lambda = -1
 * and n >= 4, restart 0 starts at the lower-bound pair and keeps that pair as
 * a candidate, so the result never falls below it.
 */
inline OptResult optimize_hlambda(const Rational& lambda, int n, const OptConfig& config = {}) {
  if (n < 2) fail(ErrorCode::invalid_argument, "support size n must be >= 2");
  if (lambda.is_zero()) fail(ErrorCode::invalid_argument, "lambda must be nonzero");
  std::vector<detail::Point> warm;
  std::vector<std::vector<DiscreteDist>> seeded;
  if (lambda == Rational(-1) && n >= 4) {
    const DiscreteDist p = prop4_distribution();
    detail::Point x = detail::log_weights_of(p, n);
    x.insert(x.end(), x.begin(), x.end());
    warm.push_back(std::move(x));
    seeded.push_back({p, p});
  }
  return detail::run_restarts(
      {n, n}, config, warm,
      [&](const std::vector<DiscreteDist>& d) { return hlambda_bound(lambda, d[0], d[1], config.budget); }, seeded);
}

/// Maximizes the Theorem-3 ratio over W_i on {0..sizes[i]-1}; `warm` holds
/// optional starting distributions, one list of K per restart.
inline OptResult optimize_theorem3(const ChannelMatrix& H, const std::vector<int>& sizes, const OptConfig& config = {},
                                   const std::vector<std::vector<DiscreteDist>>& warm = {}) {
  if (sizes.size() != static_cast<std::size_t>(H.K())) fail(ErrorCode::invalid_argument, "need one support size per user");
  for (int s : sizes) {
    if (s < 2) fail(ErrorCode::invalid_argument, "support sizes must be >= 2");
  }
  std::vector<detail::Point> starts;
  for (const auto& w : warm) {
    if (w.size() != sizes.size()) fail(ErrorCode::invalid_argument, "warm start needs K distributions");
    detail::Point x;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const detail::Point xi = detail::log_weights_of(w[i], sizes[i]);
      x.insert(x.end(), xi.begin(), xi.end());
    }
    starts.push_back(std::move(x));
  }
  return detail::run_restarts(
      sizes, config, starts,
      [&](const std::vector<DiscreteDist>& d) { return theorem3_ratio(H, d, config.budget); }, warm);
}

inline OptResult optimize_theorem3(const ChannelMatrix& H, int n, const OptConfig& config = {}) {
  return optimize_theorem3(H, std::vector<int>(static_cast<std::size_t>(H.K()), n), config);
}

}  // namespace icdof
