#include <gtest/gtest.h>

#include "cli_runner.hpp"
#include "json.hpp"

using nlohmann::json;

namespace {

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST(CliMark, PoissonClosure) {
  const CliResult r = run_cli("mark po:6 --a 0.5,0.3333333");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_TRUE(contains(r.out, "ProductPoisson(lambda=(3, 2))")) << r.out;
}

TEST(CliMark, VerifyReportsDiscrepancy) {
  const CliResult r = run_cli("mark bin:4:0.5 --a 0.5,0.5 --verify --json");
  ASSERT_EQ(r.exit_code, 0);
  const json j = json::parse(r.out);
  EXPECT_LE(j["verify"]["max_discrepancy"].get<double>(), 1e-10);
  EXPECT_EQ(j["law"]["family"], "multinomial");
}

TEST(CliMark, WeightAboveOne) {
  const CliResult r = run_cli("mark po:2 --a 0.7,0.5", true);
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_TRUE(contains(r.out, "|a| = 1.2 exceeds 1")) << r.out;
  EXPECT_TRUE(contains(r.out, "--a")) << r.out;
}

TEST(CliMark, ParseErrors) {
  EXPECT_EQ(run_cli("mark foo:1 --a 0.5").exit_code, 2);
  EXPECT_EQ(run_cli("mark po:2 --a 0.5,x").exit_code, 2);
  EXPECT_EQ(run_cli("mark po:2").exit_code, 2);
  EXPECT_EQ(run_cli("frobnicate").exit_code, 2);
  EXPECT_EQ(run_cli("").exit_code, 2);
  EXPECT_EQ(run_cli("mark bin:4:1.5 --a 0.5").exit_code, 3);
}

TEST(CliMark, HelpExitsZero) {
  const CliResult r = run_cli("--help");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_TRUE(contains(r.out, "negbin:n:q")) << r.out;
}

TEST(CliRemark, ClosureAndErrors) {
  const CliResult r = run_cli("remark mpo:1,2 --A \"0.5,0.25;0.5,0.5\" --json");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(json::parse(r.out)["law"]["lambda"], json({1.0, 1.5}));

  const CliResult id = run_cli("remark mpo:1,2 --A \"1,0;0,1\"");
  EXPECT_TRUE(contains(id.out, "ProductPoisson(lambda=(1, 2))")) << id.out;

  const CliResult bad = run_cli("remark mpo:1,2 --A \"0.6,0;0.5,1\"", true);
  EXPECT_EQ(bad.exit_code, 3);
  EXPECT_TRUE(contains(bad.out, "column 1")) << bad.out;
  EXPECT_EQ(run_cli("remark mpo:1,2 --A \"1;0\"").exit_code, 3);
}

TEST(CliRemark, OracleLawWithVerify) {
  const CliResult r = run_cli("remark multi:3:0.4,0.5 --A \"0.5,0.2;0.3,0.7\" --verify --eps 1e-10 --json");
  ASSERT_EQ(r.exit_code, 0);
  const json j = json::parse(r.out);
  EXPECT_EQ(j["rule"], "oracle");
  EXPECT_EQ(j["law"]["family"], "joint_finite_pmf");
}

TEST(CliPaint, Verdicts) {
  EXPECT_TRUE(contains(run_cli("paint bin:10:0.5 --r 0.5").out,
                       "underdispersed; Cov = -0.625; negatively correlated"));
  EXPECT_TRUE(contains(run_cli("paint po:7 --r 0.3").out,
                       "equidispersed; Cov = 0; uncorrelated (independent: Poisson)"));
  EXPECT_TRUE(contains(run_cli("paint pmf:@" + data_path("twopoint.json") + " --r 0.5").out,
                       "equidispersed; Cov = 0; uncorrelated but dependent"));
  EXPECT_TRUE(contains(run_cli("paint negbin:2:0.5 --r 0.5").out, "overdispersed; Cov = 0.5; positively correlated"));
}

TEST(CliPaint, RangeAndMonteCarlo) {
  EXPECT_EQ(run_cli("paint bin:10:0.5 --r 1.5").exit_code, 3);
  EXPECT_EQ(run_cli("paint bin:10:0.5 --r 0").exit_code, 3);
  const CliResult a = run_cli("paint bin:10:0.5 --r 0.5 --mc 20000 --seed 4 --json");
  const CliResult b = run_cli("paint bin:10:0.5 --r 0.5 --mc 20000 --seed 4 --json");
  ASSERT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_TRUE(json::parse(a.out)["monte_carlo"]["consistent"].get<bool>());
}

TEST(CliVerify, SuitesAndJson) {
  const CliResult closure = run_cli("verify closure");
  EXPECT_EQ(closure.exit_code, 0);
  EXPECT_TRUE(contains(closure.out, "max discrepancy")) << closure.out;

  const CliResult all = run_cli("verify all --json");
  EXPECT_EQ(all.exit_code, 0);
  const json j = json::parse(all.out);
  ASSERT_TRUE(j.is_array());
  EXPECT_GT(j.size(), 200u);
  EXPECT_TRUE(j[0].contains("max_discrepancy"));
  EXPECT_EQ(j.dump(2) + "\n", all.out);

  EXPECT_EQ(run_cli("verify nonsense").exit_code, 2);
}

TEST(CliJson, RoundTripsByteIdentically) {
  for (const std::string& args : std::vector<std::string>{"mark negbin:3:0.5 --a 0.5,0.5 --json", "remark \"mherm:1,1:0.25,0.25;0.25,0.25\" --A \"0.5,0.25;0.5,0.5\" --json",
                                 "paint herm:2:1 --r 0.25 --mc 1000 --seed 9 --json", "mark pmf:@" + data_path("twopoint.json") + " --a 0.5,0.5 --json"}) {
    const CliResult r = run_cli(args);
    ASSERT_EQ(r.exit_code, 0) << args;
    EXPECT_EQ(json::parse(r.out).dump(2) + "\n", r.out) << args;
  }
}
