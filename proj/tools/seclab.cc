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

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/statusor.h"
#include "json.hpp"
#include "seclab/attack/attack.h"
#include "seclab/attack/linear_model.h"
#include "seclab/group_math.h"
#include "seclab/sim/bench.h"
#include "seclab/sim/simulation.h"
#include "seclab/sim/transcript.h"
#include "seclab/status.h"

namespace seclab {
namespace {

using Json = nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kOperatorError = 2;

struct ProtocolFlags {
  uint32_t users = 10;
  uint32_t threshold = 7;
  uint32_t iterations = 3;
  uint32_t vector_len = 4;
  uint32_t input_bits = 8;
  int group_bits = 40;
  std::string mode = "semi-honest";
  std::string variant = "baseline";
  bool defense_mac = false;
  bool defense_multisig = false;
  uint64_t seed = 1;
};

void AddGroupFlags(CLI::App* cmd, ProtocolFlags& f) {
  cmd->add_option("--vector-len", f.vector_len, "Coordinates per update")
      ->check(CLI::Range(1u, 1u << 20));
  cmd->add_option("--input-bits", f.input_bits, "Input domain is [0, 2^bits)")
      ->check(CLI::Range(1u, 32u));
  cmd->add_option("--group-bits", f.group_bits, "Masking group size in bits")
      ->check(CLI::Range(16, 256));
  cmd->add_option("--seed", f.seed, "Seed for every random choice");
}

void AddProtocolFlags(CLI::App* cmd, ProtocolFlags& f) {
  cmd->add_option("--users", f.users, "Number of users n")->check(CLI::Range(1u, 100000u));
  cmd->add_option("--threshold", f.threshold, "Shamir threshold t")
      ->check(CLI::Range(1u, 100000u));
  cmd->add_option("--iterations", f.iterations, "Aggregation iterations K")
      ->check(CLI::Range(1u, 1000000u));
  AddGroupFlags(cmd, f);
  cmd->add_option("--mode", f.mode, "semi-honest or malicious")
      ->check(CLI::IsMember({"semi-honest", "malicious"}));
  cmd->add_option("--variant", f.variant, "baseline or per-iteration-masks")
      ->check(CLI::IsMember({"baseline", "per-iteration-masks"}));
  cmd->add_flag("--defense-mac", f.defense_mac, "Authenticate round-1 updates");
  cmd->add_flag("--defense-multisig", f.defense_multisig,
                "Aggregate online-set signatures");
}

absl::StatusOr<GroupParams> MaskingGroup(const ProtocolFlags& f) {
  return GenerateGroup(f.group_bits, f.seed);
}

absl::StatusOr<ProtocolConfig> BuildConfig(const ProtocolFlags& f) {
  ProtocolConfig c;
  c.n = f.users;
  c.t = f.threshold;
  c.iterations = f.iterations;
  c.vector_len = f.vector_len;
  c.input_bits = f.input_bits;
  SECLAB_ASSIGN_OR_RETURN(c.mode, ParseMode(f.mode));
  SECLAB_ASSIGN_OR_RETURN(c.variant, ParseVariant(f.variant));
  c.defenses.mac_updates = f.defense_mac;
  c.defenses.multisig = f.defense_multisig;
  SECLAB_ASSIGN_OR_RETURN(c.masking_group, MaskingGroup(f));
  c.seed = f.seed;
  SECLAB_RETURN_IF_ERROR(c.Validate());
  return c;
}

int Fail(const absl::Status& status) {
  std::cerr << "error: " << status.message() << "\n";
  return kOperatorError;
}

int Fail(const std::string& message) {
  std::cerr << "error: " << message << "\n";
  return kOperatorError;
}

bool WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << contents;
  return static_cast<bool>(out);
}

absl::StatusOr<Json> ReadJson(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return MakeError(ErrorKind::kMalformedRecord, "cannot open " + path);
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  Json j = Json::parse(buffer.str(), nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) {
    return MakeError(ErrorKind::kMalformedRecord, path + " is not valid JSON");
  }
  return j;
}

// "1:2,1:3" -> {(1, 2), (1, 3)}.
absl::StatusOr<std::vector<IterationPair>> ParsePairs(const std::string& text) {
  std::vector<IterationPair> pairs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    IterationPair pair;
    char colon = 0;
    std::stringstream is(item);
    if (!(is >> pair.k1 >> colon >> pair.k2) || colon != ':' || !is.eof() ||
        pair.k1 == 0 || pair.k2 == 0) {
      return MakeError(ErrorKind::kInvalidConfig, "bad iteration pair '" + item + "'");
    }
    pairs.push_back(pair);
  }
  return pairs;
}

struct RunFlags {
  ProtocolFlags protocol;
  double dropout_rate = 0.0;
  std::string adversary = "passive";
  std::string scenario = "uniform";
  std::string report;
  std::string transcript;
};

int CmdRun(const RunFlags& f) {
  auto config = BuildConfig(f.protocol);
  if (!config.ok()) return Fail(config.status());
  auto adversary = ParseAdversary(f.adversary);
  if (!adversary.ok()) return Fail(adversary.status());
  RunOptions options;
  options.dropout_rate = f.dropout_rate;
  options.adversary.kind = *adversary;
  std::optional<LinearModelScenario> scenario;
  if (f.scenario == "linear-model") {
    Prng prng = Prng::FromSeed(config->seed, "linear-model");
    scenario = LinearModelScenario::Create(*config, prng);
    options.inputs = scenario->AsInputSource();
  }
  auto outcome = RunSimulation(*config, options);
  if (!outcome.ok()) return Fail(outcome.status());
  if (scenario.has_value()) outcome->report.extra = scenario->ToJson();
  if (!WriteFile(f.report, outcome->report.ToJson().dump(2) + "\n")) {
    return Fail("cannot write " + f.report);
  }
  if (!f.transcript.empty()) {
    absl::Status written = WriteTranscript(outcome->transcript, f.transcript);
    if (!written.ok()) return Fail(written);
  }
  const RunReport& r = outcome->report;
  size_t completed = 0;
  size_t correct = 0;
  for (const auto& it : r.iterations) {
    completed += it.completed();
    correct += it.correct();
  }
  std::cout << "setup: " << r.setup_abort.value_or("ok") << "\n"
            << "iterations: " << r.iterations.size() << " run, " << completed
            << " completed, " << correct << " correct\n"
            << "transcript sha256: " << r.transcript_sha256 << "\n";
  return kOk;
}

struct AttackFlags {
  std::string transcript;
  std::string report;
  std::string out;
  std::string pairs;
};

int CmdAttack(const AttackFlags& f) {
  auto run = ReadJson(f.report);
  if (!run.ok()) return Fail(run.status());
  auto transcript = ReplayTranscript(f.transcript);
  if (!transcript.ok()) return Fail(transcript.status());
  if (!run->contains("config") || !run->contains("ground_truth_inputs")) {
    return Fail(f.report + " is not a run report");
  }
  auto config = ConfigFromJson(run->at("config"));
  if (!config.ok()) return Fail(config.status());

  GroundTruthInputs truth;
  try {
    for (const auto& [id, rows] : run->at("ground_truth_inputs").items()) {
      truth[std::stoull(id)] = rows.get<std::vector<std::vector<uint64_t>>>();
    }
  } catch (const std::exception& e) {
    return Fail(std::string("bad ground truth: ") + e.what());
  }

  std::vector<IterationPair> pairs = AllPairs(config->iterations);
  if (!f.pairs.empty()) {
    auto parsed = ParsePairs(f.pairs);
    if (!parsed.ok()) return Fail(parsed.status());
    pairs = *std::move(parsed);
  }
  auto attack = EvaluateAttack(config->masking_group, *transcript,
                               config->vector_len, truth, pairs);
  if (!attack.ok()) return Fail(attack.status());

  Json merged = *std::move(run);
  merged["attack"] = attack->ToJson();
  if (merged.contains("scenario") &&
      merged["scenario"].value("name", "") == "linear-model") {
    auto scenario = LinearModelScenario::FromJson(merged["scenario"]);
    if (!scenario.ok()) return Fail(scenario.status());
    merged["attack"]["linear_inversion"] = RunInversionDemo(*attack, *scenario);
  }
  if (!WriteFile(f.out, merged.dump(2) + "\n")) return Fail("cannot write " + f.out);
  std::cout << "triples: " << attack->triples.size() << ", matches: "
            << attack->matches << ", match rate: ";
  if (attack->match_rate.has_value()) {
    std::cout << *attack->match_rate << "\n";
  } else {
    std::cout << "undefined\n";
  }
  return kOk;
}

struct BenchFlags {
  ProtocolFlags protocol;
  std::vector<uint32_t> sizes;
  std::string report;
};

int CmdBench(const BenchFlags& f) {
  if (f.sizes.empty()) return Fail("--sizes needs at least one user count");
  ProtocolFlags pf = f.protocol;
  pf.users = *std::max_element(f.sizes.begin(), f.sizes.end());
  pf.threshold = 1;
  pf.iterations = 1;
  pf.mode = "malicious";
  auto base = BuildConfig(pf);
  if (!base.ok()) return Fail(base.status());
  auto rows = RunBench(*base, f.sizes);
  if (!rows.ok()) return Fail(rows.status());
  const std::string table = BenchToJson(*rows).dump(2) + "\n";
  if (f.report.empty()) {
    std::cout << table;
  } else if (!WriteFile(f.report, table)) {
    return Fail("cannot write " + f.report);
  }
  return kOk;
}

// Flat "key = value" lines become "--key=value"; '#' starts a comment.
absl::StatusOr<std::vector<std::string>> ConfigArgs(const std::string& path) {
  std::ifstream in(path);
  if (!in) return MakeError(ErrorKind::kInvalidConfig, "cannot open " + path);
  std::vector<std::string> args;
  std::string line;
  size_t line_no = 0;
  auto trim = [](std::string v) {
    const auto first = v.find_first_not_of(" \t\r");
    if (first == std::string::npos) return std::string();
    return v.substr(first, v.find_last_not_of(" \t\r") - first + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      return MakeError(ErrorKind::kInvalidConfig,
                       path + " line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (key.rfind("--", 0) != 0) key = "--" + key;
    if (key == "--config") {
      return MakeError(ErrorKind::kInvalidConfig, "config files cannot nest");
    }
    args.push_back(key + "=" + value);
  }
  return args;
}

struct Cli {
  CLI::App app{"Secure aggregation laboratory: run, attack, bench", "seclab"};
  std::string config;
  RunFlags run_flags;
  AttackFlags attack_flags;
  BenchFlags bench_flags;
  CLI::App* run = nullptr;
  CLI::App* attack = nullptr;
  CLI::App* bench = nullptr;
};

std::unique_ptr<Cli> MakeCli() {
  auto cli = std::make_unique<Cli>();
  CLI::App& app = cli->app;
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  const char* config_help = "Flat key = value file mirroring the flags; flags win";

  RunFlags& rf = cli->run_flags;
  CLI::App* run = app.add_subcommand("run", "Run setup and K aggregation iterations");
  run->add_option("--config", cli->config, config_help);
  AddProtocolFlags(run, rf.protocol);
  run->add_option("--dropout-rate", rf.dropout_rate,
                  "Max fraction of users offline per iteration")
      ->check(CLI::Range(0.0, 1.0));
  run->add_option("--adversary", rf.adversary, "none, passive or tamper")
      ->check(CLI::IsMember({"none", "passive", "tamper"}));
  run->add_option("--scenario", rf.scenario, "uniform or linear-model")
      ->check(CLI::IsMember({"uniform", "linear-model"}));
  run->add_option("--report", rf.report, "Run report JSON path")->required();
  run->add_option("--transcript", rf.transcript, "Transcript JSONL path");

  AttackFlags& af = cli->attack_flags;
  CLI::App* attack =
      app.add_subcommand("attack", "Recover update differences from a transcript");
  attack->add_option("--config", cli->config, config_help);
  attack->add_option("--transcript", af.transcript, "Transcript JSONL")->required();
  attack->add_option("--report", af.report, "Run report JSON")->required();
  attack->add_option("--out", af.out, "Output: the run report with an attack section")
      ->required();
  attack->add_option("--pairs", af.pairs,
                     "Iteration pairs k1:k2,... (default: all k1 < k2)");

  BenchFlags& bf = cli->bench_flags;
  CLI::App* bench =
      app.add_subcommand("bench", "Round-3 verification cost with multisig off/on");
  bench->add_option("--config", cli->config, config_help);
  AddGroupFlags(bench, bf.protocol);
  bench->add_option("--sizes", bf.sizes, "User counts, comma separated")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
      ->required()
      ->check(CLI::Range(2u, 100000u));
  bench->add_option("--report", bf.report, "Bench table JSON path");

  cli->run = run;
  cli->attack = attack;
  cli->bench = bench;
  return cli;
}

// Returns nullopt on success, otherwise the exit code.
std::optional<int> Parse(Cli& cli, const std::vector<std::string>& args) {
  std::vector<char*> argv;
  for (const auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
  try {
    cli.app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = cli.app.exit(e);
    return code == 0 ? kOk : kOperatorError;
  }
  return std::nullopt;
}

int Main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  auto cli = MakeCli();
  if (auto code = Parse(*cli, args)) return *code;
  if (!cli->config.empty()) {
    // Reparse with the file's settings ahead of the command line so that
    // explicit flags take precedence.
    auto extra = ConfigArgs(cli->config);
    if (!extra.ok()) return Fail(extra.status());
    const CLI::App* chosen = cli->app.get_subcommands().front();
    std::vector<std::string> merged = {args[0], chosen->get_name()};
    merged.insert(merged.end(), extra->begin(), extra->end());
    bool after_subcommand = false;
    for (size_t i = 1; i < args.size(); ++i) {
      if (after_subcommand) merged.push_back(args[i]);
      if (args[i] == chosen->get_name()) after_subcommand = true;
    }
    cli = MakeCli();
    if (auto code = Parse(*cli, merged)) return *code;
  }
  if (cli->run->parsed()) return CmdRun(cli->run_flags);
  if (cli->attack->parsed()) return CmdAttack(cli->attack_flags);
  return CmdBench(cli->bench_flags);
}

}  // namespace
}  // namespace seclab

int main(int argc, char** argv) { return seclab::Main(argc, argv); }
