/*
 * Copyright 2026 The seclab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "absl/strings/str_cat.h"
#include "gtest/gtest.h"
#include "json.hpp"

namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           absl::StrCat("seclab_cli_", ::getpid(), "_",
                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  int Run(const std::string& args) {
    const std::string cmd =
        absl::StrCat(SECLAB_CLI_PATH, " ", args, " >", Path("stdout"), " 2>", Path("stderr"));
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  static std::string Slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  Json Load(const std::string& name) { return Json::parse(Slurp(Path(name))); }

  std::string RunArgs(const std::string& variant, const std::string& report,
                      const std::string& transcript) {
    return absl::StrCat("run --users 10 --threshold 7 --iterations 3 --vector-len 4 "
                        "--input-bits 8 --variant ",
                        variant, " --mode malicious --seed 42 --report ", Path(report),
                        " --transcript ", Path(transcript));
  }

  fs::path dir_;
};

TEST_F(CliTest, RunThenAttackBaseline) {
  ASSERT_EQ(Run(RunArgs("baseline", "out.json", "t.jsonl")), 0) << Slurp(Path("stderr"));
  ASSERT_TRUE(fs::exists(Path("t.jsonl")));
  Json report = Load("out.json");
  ASSERT_EQ(report["iterations"].size(), 3u);
  for (const auto& it : report["iterations"]) EXPECT_TRUE(it["correct"].get<bool>());

  ASSERT_EQ(Run(absl::StrCat("attack --transcript ", Path("t.jsonl"), " --report ",
                             Path("out.json"), " --out ", Path("attack.json"))),
            0)
      << Slurp(Path("stderr"));
  Json attack = Load("attack.json")["attack"];
  EXPECT_EQ(attack["match_rate"].get<double>(), 1.0);
  EXPECT_EQ(attack["triples"].size(), 120u);
}

TEST_F(CliTest, HardenedAttackMatchesNothingAtFortyBits) {
  ASSERT_EQ(Run(RunArgs("per-iteration-masks", "out.json", "t.jsonl")), 0);
  ASSERT_EQ(Run(absl::StrCat("attack --transcript ", Path("t.jsonl"), " --report ",
                             Path("out.json"), " --out ", Path("attack.json"),
                             " --pairs 1:2,2:3")),
            0);
  Json attack = Load("attack.json")["attack"];
  EXPECT_EQ(attack["match_rate"].get<double>(), 0.0);
  EXPECT_EQ(attack["triples"].size(), 80u);
}

TEST_F(CliTest, IdenticalFlagsGiveIdenticalBytes) {
  ASSERT_EQ(Run(RunArgs("baseline", "a.json", "a.jsonl") + " --dropout-rate 0.2"), 0);
  ASSERT_EQ(Run(RunArgs("baseline", "b.json", "b.jsonl") + " --dropout-rate 0.2"), 0);
  EXPECT_EQ(Slurp(Path("a.json")), Slurp(Path("b.json")));
  EXPECT_EQ(Slurp(Path("a.jsonl")), Slurp(Path("b.jsonl")));
}

TEST_F(CliTest, OperatorErrorsExitTwo) {
  EXPECT_EQ(Run(absl::StrCat("run --users 10 --threshold 11 --report ", Path("r.json"))), 2);
  EXPECT_EQ(Run(absl::StrCat("run --users 10 --threshold 7 --dropout-rate 0.5 --report ",
                             Path("r.json"))),
            2);
  EXPECT_FALSE(fs::exists(Path("r.json")));
  EXPECT_EQ(Run(absl::StrCat("run --users 10 --bogus 1 --report ", Path("r.json"))), 2);
  EXPECT_EQ(Run(absl::StrCat("attack --transcript ", Path("missing.jsonl"), " --report ",
                             Path("missing.json"), " --out ", Path("x.json"))),
            2);
  EXPECT_EQ(Run("bench --sizes"), 2);
  EXPECT_EQ(Run("bench --sizes 1"), 2);
  EXPECT_EQ(Run("frobnicate"), 2);
}

TEST_F(CliTest, MalformedTranscriptExitsTwo) {
  ASSERT_EQ(Run(RunArgs("baseline", "out.json", "t.jsonl")), 0);
  std::ofstream(Path("bad.jsonl")) << "{\"step\":1,\"k\":1\n";
  EXPECT_EQ(Run(absl::StrCat("attack --transcript ", Path("bad.jsonl"), " --report ",
                             Path("out.json"), " --out ", Path("x.json"))),
            2);
  EXPECT_NE(Slurp(Path("stderr")).find("line 1"), std::string::npos);
}

TEST_F(CliTest, ProtocolAbortIsStillExitZero) {
  // Too few users survive the MAC check: the aborted iteration is data.
  ASSERT_EQ(Run(absl::StrCat("run --users 3 --threshold 3 --iterations 2 --adversary tamper "
                             "--defense-mac --report ",
                             Path("r.json"))),
            0);
  Json report = Load("r.json");
  for (const auto& it : report["iterations"]) {
    EXPECT_EQ(it["status"].get<std::string>(), "AbortTooFewOnline");
  }
}

TEST_F(CliTest, BenchTable) {
  ASSERT_EQ(Run(absl::StrCat("bench --sizes 10,20,40 --report ", Path("bench.json"))), 0);
  Json rows = Load("bench.json");
  ASSERT_EQ(rows.size(), 6u);
  for (const auto& row : rows) {
    const double n = row["users"].get<double>();
    const double v = row["round3_signature_verifications_per_user"].get<double>();
    EXPECT_EQ(v, row["multisig"].get<bool>() ? 1.0 : n);
  }
}

TEST_F(CliTest, ConfigFileWithFlagOverride) {
  std::ofstream(Path("c.conf")) << "# experiment\nusers = 6\nthreshold = 4\n"
                                   "iterations = 2\nmode = \"malicious\"\n";
  ASSERT_EQ(Run(absl::StrCat("run --config ", Path("c.conf"), " --users 5 --report ",
                             Path("r.json"))),
            0)
      << Slurp(Path("stderr"));
  Json config = Load("r.json")["config"];
  EXPECT_EQ(config["users"].get<int>(), 5);
  EXPECT_EQ(config["threshold"].get<int>(), 4);
  EXPECT_EQ(config["mode"].get<std::string>(), "malicious");
  std::ofstream(Path("bad.conf")) << "colour = blue\n";
  EXPECT_EQ(Run(absl::StrCat("run --config ", Path("bad.conf"), " --report ", Path("r.json"))),
            2);
}

TEST_F(CliTest, LinearModelScenario) {
  ASSERT_EQ(Run(absl::StrCat("run --users 5 --threshold 3 --iterations 2 --vector-len 8 "
                             "--input-bits 16 --scenario linear-model --report ",
                             Path("r.json"), " --transcript ", Path("t.jsonl"))),
            0);
  ASSERT_EQ(Run(absl::StrCat("attack --transcript ", Path("t.jsonl"), " --report ",
                             Path("r.json"), " --out ", Path("a.json"))),
            0);
  Json out = Load("a.json");
  EXPECT_GT(out["attack"]["linear_inversion"]["mean_abs_cosine"].get<double>(), 0.99);
}

TEST_F(CliTest, HelpExitsZero) { EXPECT_EQ(Run("--help"), 0); }

}  // namespace
