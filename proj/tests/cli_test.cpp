// Copyright 2026 The dpm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpm/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

namespace dpm {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) { return ::testing::TempDir() + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

TEST(CliTest, MomentsCsv) {
  const Result r = call({"moments", "--alphas", "2,3", "--max-degree", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "k1,k2,value,method");
  bool seen = false;
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    if (line.rfind("1,1,", 0) == 0) {
      seen = true;
      EXPECT_NEAR(std::stod(line.substr(4)), 0.2, 1e-15);
    }
  }
  EXPECT_TRUE(seen);
  EXPECT_EQ(rows, 15);
  const Result rec = call({"moments", "--alphas", "2,3", "--max-degree", "4", "--method",
                           "recursion"});
  EXPECT_EQ(rec.code, 0);
}

TEST(CliTest, SampleIsByteIdentical) {
  const std::vector<std::string> args = {"sample", "--construction", "stick", "--alpha", "1",
                                         "--n", "3", "--seed", "7"};
  const Result a = call(args), b = call(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  int lines = 0;
  std::istringstream in(a.out);
  for (std::string l; std::getline(in, l); ++lines) {
    const auto j = nlohmann::json::parse(l);
    double total = 0.0;
    for (const auto& atom : j["measure"]["atoms"]) total += atom["w"].get<double>();
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
  EXPECT_EQ(lines, 3);
  const Result g = call({"sample", "--construction", "gamma", "--alpha", "2", "--n", "2"});
  EXPECT_EQ(g.code, 0) << g.err;
}

TEST(CliTest, VerifyJsonEnvelope) {
  const Result r = call({"verify", "tbeta", "--n", "20000", "--seed", "5", "--jobs", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["tool"], "dpm");
  EXPECT_EQ(j["version"], version_string());
  EXPECT_EQ(j["config"]["seed"], 5);
  EXPECT_FALSE(j.contains("duration_seconds"));
  ASSERT_TRUE(j["reports"].is_array());
  for (const auto& rep : j["reports"]) {
    for (const char* key : {"name", "lhs_estimate", "rhs_estimate", "combined_stderr", "z_score",
                            "p_value", "n_samples", "seed", "verdict"}) {
      EXPECT_TRUE(rep.contains(key)) << key;
    }
  }
  EXPECT_NE(r.err.find("finished in"), std::string::npos);
}

TEST(CliTest, VerifyDeterministicAcrossRunsAndWorkers) {
  const std::string p1 = temp_path("det1.json"), p2 = temp_path("det2.json");
  ASSERT_EQ(call({"verify", "mecke", "--n", "20000", "--seed", "9", "--jobs", "1", "--out", p1})
                .code,
            0);
  ASSERT_EQ(call({"verify", "mecke", "--n", "20000", "--seed", "9", "--jobs", "3", "--out", p2})
                .code,
            0);
  EXPECT_EQ(slurp(p1), slurp(p2));
  EXPECT_FALSE(slurp(p1).empty());
}

TEST(CliTest, EmbedTiming) {
  const Result r = call({"verify", "tbeta2", "--n", "20000", "--embed-timing"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(nlohmann::json::parse(r.out).contains("duration_seconds"));
}

TEST(CliTest, CsvFormat) {
  const Result r = call({"verify", "tbeta2", "--n", "20000", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("name,kind,expect,", 0), 0u);
}

TEST(CliTest, ConfigFileWithFlagOverride) {
  const std::string cfg = temp_path("cfg.json");
  std::ofstream(cfg) << R"({"n": 30000, "seed": 17, "alpha": 3, "p": 0.2})";
  const Result r = call({"verify", "tbeta", "--config", cfg, "--seed", "18"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["config"]["seed"], 18);
  EXPECT_EQ(j["config"]["n"], 30000);
  EXPECT_EQ(j["config"]["p"], 0.2);
  EXPECT_EQ(j["config"]["model"]["alpha"], 3.0);
}

TEST(CliTest, UsageErrorsExitTwo) {
  const std::string bad = temp_path("bad.json");
  std::ofstream(bad) << "{ not json";
  const std::string unknown = temp_path("unknown.json");
  std::ofstream(unknown) << R"({"bogus": 1})";
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"verify", "mecke", "--no-such-flag"},
           {},
           {"verify"},
           {"verify", "tbeta", "--config", bad},
           {"verify", "tbeta", "--config", unknown},
           {"verify", "tbeta", "--config", temp_path("missing.json")},
           {"verify", "tbeta", "--seed", "abc"},
           {"verify", "tbeta", "--p", "1.5"},
           {"verify", "tbeta", "--n", "10"},
           {"verify", "sizebias", "--base", R"({"atom_probs": [1.0]})"},
           {"verify", "mecke", "--base", "{oops"},
           {"moments", "--alphas", "-1,2"},
           {"characterize", "--depth", "12"},
       }) {
    const Result r = call(args);
    EXPECT_EQ(r.code, 2) << (args.empty() ? "" : args[0]) << " " << r.err;
    EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1) << r.err;
  }
}

TEST(CliTest, RandomSeedIsEchoed) {
  const Result r = call({"verify", "tbeta2", "--n", "20000", "--seed", "random"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(nlohmann::json::parse(r.out)["config"]["seed"].is_number_unsigned());
}

TEST(CliTest, JobsFromEnvironment) {
  ::setenv("DPM_JOBS", "2", 1);
  const Result a = call({"verify", "tbeta", "--n", "10000"});
  ::unsetenv("DPM_JOBS");
  const Result b = call({"verify", "tbeta", "--n", "10000", "--jobs", "1"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(CliTest, CharacterizeVerdicts) {
  const Result good = call({"characterize", "--n", "100000", "--depth", "4"});
  EXPECT_EQ(good.code, 0) << good.out;
  const Result bad = call({"characterize", "--n", "200000", "--depth", "4", "--w-law", "uniform"});
  EXPECT_EQ(bad.code, 1);
  const Result half = call({"characterize", "--n", "5000", "--depth", "3", "--p", "0.5"});
  EXPECT_NE(half.err.find("warning"), std::string::npos);
  const Result probe = call({"characterize", "--probe-symmetric", "--depth", "6"});
  EXPECT_EQ(probe.code, 0);
  EXPECT_EQ(nlohmann::json::parse(probe.out)["probe"].size(), 3u);
}

TEST(CliTest, HelpAndVersion) {
  EXPECT_EQ(call({"--help"}).code, 0);
  const Result v = call({"--version"});
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find(version_string()), std::string::npos);
}

}  // namespace
}  // namespace dpm
