#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "flowauction/cli.hpp"
#include "oracles.hpp"

using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = flowauction::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("flowauction_test_" + name)).string();
}

}  // namespace

TEST(Cli, SolveSingleBuyer) {
  const Result r = run({"solve", oracle::data_path("single_buyer.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json doc = json::parse(r.out);
  EXPECT_EQ(doc["prices"], json::parse(R"({"alpha":0,"beta":0})"));
  EXPECT_EQ(doc["allocation"], json::parse(R"({"j":{"alpha":1,"beta":1}})"));
}

TEST(Cli, SolveEmpty) {
  const Result r = run({"solve", oracle::data_path("empty.json")});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out), json::parse(R"({"prices":{},"allocation":{}})"));
}

TEST(Cli, ModesPrintIdenticalPrices) {
  const Result unit = run({"solve", oracle::data_path("three_buyers.json"), "--mode", "unit"});
  const Result adapted = run({"solve", oracle::data_path("three_buyers.json"), "--mode", "adapted"});
  const Result cold = run({"solve", oracle::data_path("three_buyers.json"), "--no-warm-start"});
  ASSERT_EQ(unit.code, 0);
  EXPECT_EQ(json::parse(unit.out)["prices"], json::parse(adapted.out)["prices"]);
  EXPECT_EQ(json::parse(unit.out)["prices"], json::parse(cold.out)["prices"]);
  EXPECT_EQ(json::parse(unit.out)["prices"], json::parse(R"({"alpha":2,"beta":0})"));
}

TEST(Cli, TraceAndReplay) {
  const std::string trace = temp_path("trace.json");
  const Result r = run({"solve", oracle::data_path("three_buyers.json"), "--trace", trace});
  ASSERT_EQ(r.code, 0);
  const json doc = json::parse(flowauction::read_file(trace));
  ASSERT_EQ(doc["iterations"].size(), 2U);
  const json& first = doc["iterations"][0];
  EXPECT_EQ(first["iter"], 0);
  EXPECT_EQ(first["raised_set"], json::parse(R"(["alpha"])"));
  EXPECT_EQ(first["alpha"], 1);
  EXPECT_EQ(first["flow_value"].get<int>() < first["cap_s"].get<int>(), true);
  EXPECT_EQ(doc["final"]["iterations"], 3);
  EXPECT_EQ(doc["final"]["prices"], json::parse(r.out)["prices"]);
  EXPECT_GT(doc["final"]["oracle_calls"].get<int>(), 0);

  for (const json& it : doc["iterations"]) {
    const std::string start = temp_path("start.json");
    std::ofstream(start) << it["prices"].dump();
    const Result replay =
        run({"solve", oracle::data_path("three_buyers.json"), "--start-prices", start});
    ASSERT_EQ(replay.code, 0);
    EXPECT_EQ(json::parse(replay.out)["prices"], doc["final"]["prices"]);
    if (it["iter"] != 0) EXPECT_NE(replay.err.find("warning"), std::string::npos);
  }
  std::filesystem::remove(trace);
}

TEST(Cli, DumpNetwork) {
  const std::string dump = temp_path("dump.txt");
  ASSERT_EQ(run({"solve", oracle::data_path("beta_overdemanded.json"), "--dump-network", dump}).code, 0);
  EXPECT_EQ(flowauction::read_file(dump), flowauction::read_file(oracle::data_path("beta_overdemanded_p0.dump")));
  std::filesystem::remove(dump);
}

TEST(Cli, DuplicateDemo) {
  const Result r = run({"duplicate-demo", oracle::data_path("single_buyer.json")});
  ASSERT_EQ(r.code, 0);
  const json doc = json::parse(r.out);
  EXPECT_EQ(doc["original"]["prices"], json::parse(R"({"alpha":0,"beta":0})"));
  EXPECT_EQ(doc["duplicated"]["prices"], json::parse(R"({"alpha#1":4,"beta#1":0})"));
}

TEST(Cli, VerifyPasses) {
  const Result r = run({"verify", oracle::data_path("beta_overdemanded.json")});
  ASSERT_EQ(r.code, 0) << r.out;
  const json doc = json::parse(r.out);
  EXPECT_TRUE(doc["overall"].get<bool>());
  EXPECT_TRUE(doc["failed"].empty());
  EXPECT_EQ(doc["checks"]["minimum_competitive_prices"]["status"], "pass");
}

TEST(Cli, VerifySkipsOverBudget) {
  const Result r = run({"verify", oracle::data_path("beta_overdemanded.json"), "--budget", "10"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["checks"]["minimum_competitive_prices"]["status"], "skipped");
}

TEST(Cli, VerifyFailsFromTooHighStart) {
  const std::string start = temp_path("high.json");
  std::ofstream(start) << R"({"alpha": 3})";
  const Result r = run({"verify", oracle::data_path("three_buyers.json"), "--start-prices", start});
  EXPECT_EQ(r.code, 2);
  const json doc = json::parse(r.out);
  EXPECT_FALSE(doc["overall"].get<bool>());
  EXPECT_NE(std::find(doc["failed"].begin(), doc["failed"].end(), "minimum_competitive_prices"),
            doc["failed"].end());
  std::filesystem::remove(start);
}

TEST(Cli, Brute) {
  const Result r = run({"brute", oracle::data_path("beta_overdemanded.json")});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["prices"], json::parse(R"({"alpha":0,"beta":1,"gamma":0})"));
  EXPECT_EQ(run({"brute", oracle::data_path("beta_overdemanded.json"), "--budget", "10"}).code, 3);
}

TEST(Cli, Monotone) {
  const Result r = run({"monotone", "--count", "25", "--seed", "3", "--threads", "2"});
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("passed 25/25 (seed 3)"), std::string::npos);
  const Result again = run({"monotone", "--count", "25", "--seed", "3", "--threads", "1"});
  EXPECT_EQ(again.out, r.out);
  const Result base = run({"monotone", oracle::data_path("three_buyers.json"), "--count", "5"});
  EXPECT_EQ(base.code, 0);
}

TEST(Cli, ParseErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"solve"}).code, 1);
  EXPECT_EQ(run({"solve", oracle::data_path("beta_overdemanded.json"), "--mode", "fast"}).code, 1);
  EXPECT_EQ(run({"solve", oracle::data_path("missing.json")}).code, 1);
  const std::string bad = temp_path("bad.json");
  std::ofstream(bad) << R"({"objects": [{"id": "a", "supply": -1}]})";
  const Result r = run({"solve", bad});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("'a'"), std::string::npos);
  std::filesystem::remove(bad);
  EXPECT_EQ(run({"--help"}).code, 0);
}
