#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

#include "icdof/json_io.hpp"

using icdof::Json;

namespace {

struct CliRun {
  int status = -1;
  std::string out;
  Json json() const { return Json::parse(out); }
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string(ICDOF_CLI_PATH) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string sample(const char* name) { return std::string(ICDOF_SAMPLES_DIR) + "/" + name; }

}  // namespace

TEST(Cli, HlambdaProp4) {
  const CliRun r = run("hlambda --lambda -1 --u " + sample("prop4.json") + " --v " + sample("prop4.json"));
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_NEAR(r.json()["bound"].get<double>(), 1.13258, 1e-4);
  EXPECT_EQ(r.json()["lambda"], "-1");
}

TEST(Cli, BoundFloor) {
  const CliRun r = run("bound-floor --k 3 --d 3 --n 4");
  ASSERT_EQ(r.status, 0);
  EXPECT_DOUBLE_EQ(r.json()["floor"].get<double>(), -2.625);
  const CliRun big = run("bound-floor --k 3 --d 1000 --n 2^1000");
  ASSERT_EQ(big.status, 0);
  EXPECT_GT(big.json()["floor"].get<double>(), 1.4);
  EXPECT_EQ(run("bound-floor --k 3 --d 1 --n 1").status, 2);
  EXPECT_EQ(run("bound-floor --k 3 --d 1 --n 3/2").status, 2);
}

TEST(Cli, ConditionWitness) {
  const CliRun r = run("condition --matrix " + sample("rational3.json") + " --degree 2");
  ASSERT_EQ(r.status, 0);
  const Json j = r.json();
  EXPECT_EQ(j["status"], "violated");
  EXPECT_EQ(j["witness_vanishes"], true);
  EXPECT_FALSE(j["witness"].empty());
  const CliRun g = run("condition --generic 3 --degree 1");
  EXPECT_EQ(g.json()["status"], "holds-up-to-bound");
}

TEST(Cli, Theorem1) {
  const CliRun r = run("bound-thm1 --generic 3 --d 1 --n 4");
  ASSERT_EQ(r.status, 0);
  const Json j = r.json();
  EXPECT_EQ(j["route"], "factored");
  EXPECT_EQ(j["caveat"], "non-exceptional-r");
  EXPECT_EQ(j["params"]["N"], 4);
  const icdof::BoundReport back = icdof::bound_report_from_json(j);
  EXPECT_EQ(icdof::to_json(back).dump(), j.dump());

  const CliRun bad = run("bound-thm1 --matrix " + sample("rational3.json") + " --d 1 --n 2");
  EXPECT_EQ(bad.status, 2);
  EXPECT_EQ(bad.json()["code"], "condition_violated");
  EXPECT_TRUE(bad.json().contains("witness"));
}

TEST(Cli, IntegerExample) {
  const CliRun r = run("bound-integer --k 3 --n 2");
  ASSERT_EQ(r.status, 0);
  EXPECT_NEAR(r.json()["closed_form"].get<double>(), 0.418414, 1e-6);
  EXPECT_EQ(r.json()["split_exact"], true);
  const CliRun m = run("bound-integer --matrix " + sample("integer_2x2.json") + " --n 4");
  ASSERT_EQ(m.status, 0);
  EXPECT_NEAR(m.json()["closed_form"].get<double>(), 4.0 / (2.0 * std::log2(48.0)), 1e-11);
}

TEST(Cli, EntropyRatioVerb) {
  const CliRun r = run("ratio-thm3 --generic 2 --w " + sample("bernoulli.json") + " --w " + sample("point0.json"));
  ASSERT_EQ(r.status, 0);
  EXPECT_DOUBLE_EQ(r.json()["ratio"].get<double>(), 1.0);
  const CliRun d = run("ratio-thm3 --generic 2 --w " + sample("point0.json") + " --w " + sample("point0.json"));
  EXPECT_EQ(d.status, 2);
  EXPECT_EQ(d.json()["code"], "degenerate");
}

TEST(Cli, OptimizeIsByteDeterministic) {
  const std::string args = "optimize --objective hlambda --lambda -1 --n 4 --restarts 3 --iters 60 --seed 5";
  const CliRun a = run(args + " --threads 1");
  const CliRun b = run(args + " --threads 3");
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  const Json j = a.json();
  EXPECT_GE(j["best_value"].get<double>(), 1.13258 - 1e-4);
  const icdof::OptResult back = icdof::opt_result_from_json(j, {"best_U", "best_V"});
  EXPECT_NEAR(icdof::hlambda_bound(icdof::Rational(-1), back.best_U(), back.best_V()), j["best_value"].get<double>(),
              1e-9);
  const CliRun t = run("optimize --objective thm3 --generic 2 --n 2 --restarts 1 --iters 10");
  ASSERT_EQ(t.status, 0);
  EXPECT_TRUE(t.json().contains("best_W2"));
}

TEST(Cli, Infodim) {
  const CliRun r = run("infodim --ifs " + sample("cantor.json") + " --m 12 --scale 729");
  ASSERT_EQ(r.status, 0);
  const Json j = r.json();
  EXPECT_NEAR(j["formula"].get<double>(), 0.630929753571, 1e-12);
  EXPECT_EQ(j["caveat"], "valid for non-exceptional r");
  EXPECT_TRUE(j["empirical"]["guard_ok"].get<bool>());
  EXPECT_EQ(run("infodim --ifs " + sample("cantor.json") + " --m 3").status, 2);
}

TEST(Cli, SumsetAndInequalities) {
  const CliRun s = run("sumset --a " + sample("set_a.json") + " --b " + sample("set_b.json"));
  ASSERT_EQ(s.status, 0);
  EXPECT_EQ(s.json()["sizes"]["sum"], 9);
  EXPECT_EQ(s.json()["trivial_bounds"]["upper_ok"], true);
  const CliRun q = run("ineq-suite --u " + sample("bernoulli.json") + " --v " + sample("bernoulli.json"));
  ASSERT_EQ(q.status, 0);
  EXPECT_NEAR(q.json()["slack_combined"].get<double>(), 1.25, 1e-12);
  EXPECT_NEAR(q.json()["slack_recall1"].get<double>(), 1.0, 1e-12);
}

TEST(Cli, ValidationErrors) {
  const CliRun bad = run("hlambda --u " + sample("bad_scalar.json") + " --v " + sample("prop4.json"));
  EXPECT_EQ(bad.status, 2);
  EXPECT_EQ(bad.json()["code"], "parse_error");
  const CliRun missing = run("hlambda --u /nonexistent.json --v " + sample("prop4.json"));
  EXPECT_EQ(missing.status, 2);
  EXPECT_EQ(run("no-such-verb").status, 2);
  EXPECT_EQ(run("").status, 2);
  const CliRun budget = run("--budget 100 bound-thm1 --generic 3 --d 1 --n 2 --route enumerate");
  EXPECT_EQ(budget.status, 2);
  EXPECT_EQ(budget.json()["code"], "budget_exceeded");
}
