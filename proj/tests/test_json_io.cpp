#include <gtest/gtest.h>

#include "gen.hpp"
#include "icdof/json_io.hpp"

using namespace icdof;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::invalid_argument;
}

}  // namespace

TEST(JsonInput, Distribution) {
  const Json j = Json::parse(R"({"atoms": [{"value": 0, "prob": "1/4"}, {"value": "h_1_2 + 1/2", "prob": "3/4"}]})");
  const DiscreteDist d = dist_from_json(j);
  EXPECT_EQ(d.probability_of(parse_scalar("h_1_2 + 1/2")), Rational(3, 4));
  EXPECT_EQ(code_of([] { (void)dist_from_json(Json::parse(R"({"atoms": [{"value": 0.5, "prob": "1"}]})")); }),
            ErrorCode::parse_error);
  EXPECT_EQ(code_of([] { (void)dist_from_json(Json::parse(R"({"atoms": [{"value": 0, "prob": 0.5}]})")); }),
            ErrorCode::parse_error);
  EXPECT_EQ(code_of([] { (void)dist_from_json(Json::parse(R"({"atom": []})")); }), ErrorCode::parse_error);
  EXPECT_EQ(code_of([] { (void)dist_from_json(Json::parse(R"({"atoms": [{"value": "2*pi", "prob": "1"}]})")); }),
            ErrorCode::parse_error);
  EXPECT_EQ(code_of([] { (void)dist_from_json(Json::parse(R"({"atoms": [{"value": "1 +", "prob": "1"}]})")); }),
            ErrorCode::parse_error);
}

TEST(JsonInput, Channel) {
  const Json j = Json::parse(R"({"K": 2, "entries": [["generic", "3/2"], [1, "generic"]]})");
  const ChannelMatrix H = channel_from_json(j);
  EXPECT_EQ(H(0, 0).str(), "h_1_1");
  EXPECT_EQ(H(0, 1), ExactScalar(Rational(3, 2)));
  EXPECT_EQ(H(1, 1).str(), "h_2_2");
  EXPECT_EQ(code_of([] { (void)channel_from_json(Json::parse(R"({"K": 2, "entries": [[1, 2]]})")); }),
            ErrorCode::parse_error);
  EXPECT_EQ(code_of([] { (void)channel_from_json(Json::parse(R"({"K": 2, "entries": [[1, 2], [3, 0.1]]})")); }),
            ErrorCode::parse_error);
}

TEST(JsonInput, IfsAndSet) {
  const IFSSpec s = ifs_from_json(Json::parse(R"({"r": "1/3", "w": [0, 2], "probs": ["1/2", "1/2"]})"));
  EXPECT_EQ(s.r, Rational(1, 3));
  EXPECT_EQ(s.w.size(), 2u);
  EXPECT_THROW((void)ifs_from_json(Json::parse(R"({"r": "3/2", "w": [0, 2], "probs": ["1/2", "1/2"]})")), Error);
  const FiniteSet a = set_from_json(Json::parse(R"({"elements": [4, 0, "1/2", 4]})"));
  EXPECT_EQ(a.size(), 3u);
  EXPECT_EQ(to_json(a).dump(), R"({"elements":["0","1/2","4"]})");
}

TEST(JsonInput, Files) {
  EXPECT_EQ(code_of([] { (void)read_json_file("/nonexistent/file.json"); }), ErrorCode::invalid_argument);
  const std::string path = testing::TempDir() + "bad.json";
  std::ofstream(path) << "{ not json";
  EXPECT_EQ(code_of([&] { (void)read_json_file(path); }), ErrorCode::parse_error);
}

TEST(JsonOutput, RationalsAreStrings) {
  const Json j = to_json(prop4_distribution());
  ASSERT_EQ(j["atoms"].size(), 4u);
  EXPECT_EQ(j["atoms"][0]["value"], "0");
  EXPECT_EQ(j["atoms"][0]["prob"], "8/15625");
  EXPECT_TRUE(j["atoms"][3]["prob"].is_string());
}

TEST(JsonOutput, TwelveDigits) {
  EXPECT_EQ(detail::round12(1.0 / 3.0), 0.333333333333);
  EXPECT_EQ(detail::round12(2.0), 2.0);
  EXPECT_EQ(Json(detail::round12(hlambda_bound(Rational(-1), prop4_distribution(), prop4_distribution()))).dump(),
            "1.13257556846");
}

// Reports re-parse and re-serialize to the same text.
TEST(JsonRoundTrip, BoundReport) {
  const std::vector<std::vector<std::int64_t>> ones{{0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
  for (const BoundReport& r : {integer_example_bound(3, ones, 2),
                               theorem1_certified_bound(ChannelMatrix::generic(3), 1, 4),
                               prop1_bound(ChannelMatrix::generic(2),
                                           std::vector<DiscreteDist>(2, prop4_distribution()), 3.5)}) {
    const Json j = to_json(r);
    EXPECT_EQ(to_json(bound_report_from_json(j)).dump(), j.dump());
    EXPECT_EQ(j["caveat"], "non-exceptional-r");
  }
}

TEST(JsonRoundTrip, OptResult) {
  OptConfig c;
  c.restarts = 2;
  c.max_iters = 30;
  const OptResult r = optimize_hlambda(Rational(-1), 3, c);
  const std::vector<std::string> names{"best_U", "best_V"};
  const Json j = to_json(r, names);
  const OptResult back = opt_result_from_json(j, names);
  EXPECT_EQ(back.best, r.best);
  EXPECT_EQ(to_json(back, names).dump(), j.dump());
}

TEST(JsonRoundTrip, ConditionReportAndErrors) {
  const ChannelMatrix H(3, {1, 2, 3, 4, 5, 6, 7, 8, 9});
  const Json j = to_json(check_condition_star(H, 1));
  EXPECT_EQ(j["status"], "violated");
  EXPECT_EQ(j["witness_vanishes"], true);
  for (const Json& t : j["witness"]) {
    EXPECT_TRUE(t["coefficient"].is_string());
    (void)parse_scalar(t["value"].get<std::string>());
  }
  try {
    (void)theorem1_certified_bound(H, 1, 2);
    FAIL();
  } catch (const Error& e) {
    const Json err = error_json(e);
    EXPECT_EQ(err["code"], "condition_violated");
    EXPECT_EQ(err["witness"], j["witness"]);
  }
  EXPECT_FALSE(error_json(Error(ErrorCode::parse_error, "x")).contains("witness"));
}

// Random distributions and sets survive serialization exactly.
TEST(JsonRoundTripProperty, DistributionsAndSets) {
  gen::Rng rng(91);
  for (int iter = 0; iter < 2000; ++iter) {
    const DiscreteDist d = iter % 2 ? gen::symbolic_dist(rng, 6) : gen::int_dist(rng, 8, 50);
    const Json j = Json::parse(to_json(d).dump());
    ASSERT_EQ(dist_from_json(j), d);
    const FiniteSet s = gen::symbolic_set(rng, 8);
    ASSERT_EQ(set_from_json(Json::parse(to_json(s).dump())), s);
  }
}
