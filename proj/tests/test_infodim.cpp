#include <gtest/gtest.h>

#include "gen.hpp"

using namespace icdof;

namespace {

IFSSpec ifs(Rational r, std::vector<ExactScalar> w, std::vector<Rational> probs) {
  IFSSpec s{std::move(r), std::move(w), std::move(probs)};
  s.validate();
  return s;
}

IFSSpec dyadic() { return ifs(Rational(1, 2), {0, 1}, {Rational(1, 2), Rational(1, 2)}); }
IFSSpec cantor() { return ifs(Rational(1, 3), {0, 2}, {Rational(1, 2), Rational(1, 2)}); }

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t out = 1;
  for (int i = 0; i < e; ++i) out *= b;
  return out;
}

}  // namespace

TEST(IFSSpec, Validation) {
  const std::vector<Rational> half{Rational(1, 2), Rational(1, 2)};
  EXPECT_THROW(ifs(Rational(1), {0, 1}, half), Error);
  EXPECT_THROW(ifs(Rational(0), {0, 1}, half), Error);
  EXPECT_THROW(ifs(Rational(1, 2), {0}, {Rational(1)}), Error);
  EXPECT_THROW(ifs(Rational(1, 2), {0, 0}, half), Error);
  EXPECT_THROW(ifs(Rational(1, 2), {0, 1}, {Rational(1, 2), Rational(1, 3)}), Error);
  EXPECT_THROW(ifs(Rational(1, 2), {0, 1, 2}, half), Error);
}

TEST(InfodimFormula, Examples) {
  EXPECT_DOUBLE_EQ(infodim_formula(dyadic()), 1.0);
  EXPECT_NEAR(infodim_formula(cantor()), std::log2(2.0) / std::log2(3.0), 1e-15);
  EXPECT_NEAR(infodim_formula(cantor()), 0.63093, 1e-5);
  EXPECT_DOUBLE_EQ(infodim_formula(ifs(Rational(1, 4), {0, 1}, {Rational(1, 2), Rational(1, 2)})), 0.5);
  // Symbolic translations are fine for the formula.
  const ExactScalar g(Generator::named("g"));
  EXPECT_DOUBLE_EQ(infodim_formula(ifs(Rational(1, 4), {0, g}, {Rational(1, 2), Rational(1, 2)})), 0.5);
}

// Formula values lie in (0, 1] and equal min(H(W)/log2(1/r), 1) from a
// naive entropy.
TEST(InfodimFormulaProperty, RangeAndValue) {
  gen::Rng rng(61);
  for (int iter = 0; iter < 2000; ++iter) {
    const std::int64_t q = gen::int_in(rng, 2, 40);
    const Rational r(gen::int_in(rng, 1, q - 1), q);
    const DiscreteDist w = gen::int_dist(rng, 8, 30);
    if (w.size() < 2) continue;
    std::vector<ExactScalar> vals;
    std::vector<Rational> probs;
    std::vector<double> p;
    for (const Atom& a : w.atoms()) {
      vals.push_back(a.value);
      probs.push_back(a.prob);
      p.push_back(a.prob.to_double());
    }
    const double f = infodim_formula(ifs(r, vals, probs));
    ASSERT_GT(f, 0.0);
    ASSERT_LE(f, 1.0);
    ASSERT_NEAR(f, std::min(gen::naive_entropy(p) / std::log2(1.0 / r.to_double()), 1.0), 1e-12);
  }
}

TEST(TruncatedDist, Examples) {
  const std::vector<ExactScalar> w{0, 1};
  EXPECT_EQ(truncated_dist(dyadic(), 1), uniform_on(w));
  std::vector<ExactScalar> eighths;
  for (int i = 0; i < 8; ++i) eighths.emplace_back(Rational(i, 4));
  EXPECT_EQ(truncated_dist(dyadic(), 3), uniform_on(eighths));
  const std::vector<ExactScalar> c{0, Rational(2, 3), 2, Rational(8, 3)};
  EXPECT_EQ(truncated_dist(cantor(), 2), uniform_on(c));
  EXPECT_THROW((void)truncated_dist(dyadic(), 0), Error);
  try {
    (void)truncated_dist(ifs(Rational(1, 7), {0, 1, 2}, {Rational(1, 3), Rational(1, 3), Rational(1, 3)}), 20, 100000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::budget_exceeded);
  }
}

// Probabilities are conserved exactly and the support is bounded by the
// number of outcomes.
TEST(TruncatedDistProperty, Conservation) {
  gen::Rng rng(62);
  for (int iter = 0; iter < 200; ++iter) {
    const std::int64_t q = gen::int_in(rng, 2, 9);
    const Rational r(gen::int_in(rng, 1, q - 1), q);
    const DiscreteDist w = gen::int_dist(rng, 3, 6);
    if (w.size() < 2) continue;
    std::vector<ExactScalar> vals;
    std::vector<Rational> probs;
    for (const Atom& a : w.atoms()) {
      vals.push_back(a.value);
      probs.push_back(a.prob);
    }
    const int m = static_cast<int>(gen::int_in(rng, 1, 6));
    const DiscreteDist x = truncated_dist(ifs(r, vals, probs), m);
    ASSERT_TRUE(x.total_probability().is_one());
    ASSERT_LE(static_cast<double>(x.size()), std::pow(static_cast<double>(w.size()), m));
  }
}

TEST(EmpiricalInfodim, Dyadic) {
  const InfodimEstimate e = empirical_infodim(dyadic(), 20, ipow(2, 15));
  EXPECT_NEAR(e.value, 1.0, 1e-6);
  EXPECT_TRUE(e.guard_ok);
  EXPECT_EQ(e.flags, std::vector<std::string>{"lower-upper-indistinguishable"});
}

TEST(EmpiricalInfodim, Cantor) {
  const InfodimEstimate e = empirical_infodim(cantor(), 20, ipow(3, 12));
  EXPECT_NEAR(e.value, infodim_formula(cantor()), 0.01);
  EXPECT_TRUE(e.guard_ok);
  // The plain ratio still carries the additive offset at this scale.
  EXPECT_GT(std::abs(e.raw_ratio - infodim_formula(cantor())), 0.01);
}

TEST(EmpiricalInfodim, NearDeterministic) {
  const Rational eps(1, 1 << 20);
  const IFSSpec s = ifs(Rational(1, 2), {0, 1}, {Rational(1) - eps, eps});
  const InfodimEstimate e = empirical_infodim(s, 12, ipow(2, 10));
  EXPECT_TRUE(e.guard_ok);
  EXPECT_NEAR(e.value, infodim_formula(s), 0.05);
}

TEST(EmpiricalInfodim, GuardAndErrors) {
  const InfodimEstimate e = empirical_infodim(dyadic(), 4, ipow(2, 10));
  EXPECT_FALSE(e.guard_ok);
  EXPECT_EQ(e.flags.back(), "guard-violated");
  EXPECT_THROW((void)empirical_infodim(dyadic(), 4, 1), Error);
  const ExactScalar g(Generator::named("g"));
  try {
    (void)empirical_infodim(ifs(Rational(1, 2), {0, g}, {Rational(1, 2), Rational(1, 2)}), 3, 4);
    FAIL();
  } catch (const Error& e2) {
    EXPECT_NE(std::string(e2.what()).find("requires ordered rationals"), std::string::npos);
  }
}

// Non-overlapping images: the estimate tracks the formula at m = 16 (m = 11
// for three maps, to stay within the atom budget).
TEST(EmpiricalInfodimProperty, ConvergesWithoutOverlaps) {
  gen::Rng rng(63);
  for (int iter = 0; iter < 12; ++iter) {
    const int n = static_cast<int>(gen::int_in(rng, 2, 3));
    const std::int64_t q = n + gen::int_in(rng, 0, 2);  // r = 1/q <= 1/n keeps the images apart
    std::vector<ExactScalar> w;
    for (int i = 0; i < n; ++i) w.emplace_back(i);
    // small denominators keep the m-fold products inside 64 bits
    std::vector<Rational> probs;
    std::int64_t total = 0;
    std::vector<std::int64_t> weights;
    for (int i = 0; i < n; ++i) total += weights.emplace_back(gen::int_in(rng, 1, 9));
    for (auto x : weights) probs.emplace_back(x, total);
    const IFSSpec s = ifs(Rational(1, q), w, probs);
    const int m = n == 2 ? 16 : 11;
    // Largest power of q with (k q) q^-m (n-1) / (1 - 1/q) <= 1, so cells
    // line up with the self-similar structure.
    std::int64_t k = q;
    while ((k * q) * q * q * (n - 1) <= ipow(q, m) * (q - 1)) k *= q;
    const InfodimEstimate e = empirical_infodim(s, m, k);
    ASSERT_TRUE(e.guard_ok) << q << " " << n;
    ASSERT_NEAR(e.value, infodim_formula(s), 0.02) << q << " " << n;
  }
}

// Refining the truncation at a fixed admissible k moves every atom by less
// than one cell, so the quantized entropy changes by at most one bit.
TEST(EmpiricalInfodimProperty, RefinementStaysWithinGuard) {
  const IFSSpec specs[] = {dyadic(), cantor(),
                           ifs(Rational(2, 5), {0, 1, 3}, {Rational(1, 5), Rational(1, 2), Rational(3, 10)})};
  for (const IFSSpec& s : specs) {
    const std::int64_t k = 64;
    std::optional<double> prev;
    for (int m = 6; m <= 11; ++m) {
      const InfodimEstimate e = empirical_infodim(s, m, k);
      if (!e.guard_ok) continue;
      const double h = detail::quantized_entropy(truncated_dist(s, m), Rational(k));
      if (prev) {
        EXPECT_LE(std::abs(h - *prev), 1.0 + 1e-12);
      }
      prev = h;
    }
    EXPECT_TRUE(prev.has_value());
  }
}
