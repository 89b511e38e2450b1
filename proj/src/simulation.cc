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

#include "seclab/sim/simulation.h"

#include <algorithm>
#include <cmath>
#include <memory>

#include "absl/strings/str_cat.h"
#include "seclab/protocol/server.h"
#include "seclab/protocol/user.h"
#include "seclab/status.h"

namespace seclab {
namespace {

using Json = nlohmann::ordered_json;
using Inboxes = std::map<uint64_t, std::vector<RoundMessage>>;

std::string StatusLabel(const absl::Status& status) {
  auto kind = GetErrorKind(status);
  return kind.has_value() ? std::string(ErrorKindName(*kind)) : status.ToString();
}

std::string_view RoleName(Role role) {
  return role == Role::kUser ? "user" : "server";
}

std::string_view PhaseName(Phase phase) {
  return phase == Phase::kSetup ? "setup" : "aggregation";
}

Role RoleOf(uint64_t party) {
  return party == kServerId ? Role::kServer : Role::kUser;
}

// Round-barrier message bus. Every delivery is one step; every delivered
// message is appended to the transcript and counted for both endpoints.
class Bus {
 public:
  Bus(Transcript* transcript, Metrics* metrics)
      : transcript_(transcript), metrics_(metrics) {}

  // `consume_round` is the receiver-side round that will read the messages.
  Inboxes Deliver(std::vector<RoundMessage> messages, Phase phase,
                  int consume_round) {
    ++step_;
    Inboxes inboxes;
    for (auto& msg : messages) {
      const size_t size = msg.WireSize();
      MetricsCell& out = metrics_->Mutable(RoleOf(msg.sender), phase, msg.round);
      out.messages_sent++;
      out.bytes_sent += size;
      MetricsCell& in = metrics_->Mutable(RoleOf(msg.receiver), phase, consume_round);
      in.messages_received++;
      in.bytes_received += size;
      transcript_->records.push_back(TranscriptRecord{step_, msg});
      inboxes[msg.receiver].push_back(std::move(msg));
    }
    return inboxes;
  }

 private:
  Transcript* transcript_;
  Metrics* metrics_;
  uint64_t step_ = 0;
};

void Attribute(Metrics& metrics, Role role, Phase phase, int round,
               const OpCounts& ops) {
  MetricsCell& cell = metrics.Mutable(role, phase, round);
  cell.activations++;
  cell.signature_verifications += ops.signature_verifications;
  cell.group_exponentiations += ops.group_exponentiations;
  metrics.dlog_steps += ops.dlog_steps;
}

std::vector<RoundMessage> Flatten(std::vector<std::vector<RoundMessage>> parts) {
  std::vector<RoundMessage> out;
  for (auto& part : parts) {
    for (auto& msg : part) out.push_back(std::move(msg));
  }
  return out;
}

// Offset of byte `byte` inside element `m` of a MaskedUpdate payload:
// [len|k][len|[len|e_0][len|e_1]...].
size_t ElementByteOffset(size_t m, size_t byte, size_t width) {
  return 4 + 8 + 4 + m * (4 + width) + 4 + byte;
}

Json IdsToJson(const std::vector<uint64_t>& ids) {
  Json j = Json::array();
  for (uint64_t id : ids) j.push_back(id);
  return j;
}

}  // namespace

absl::StatusOr<DropoutSchedule> ScheduleDropouts(const ProtocolConfig& config,
                                                 double rate, Prng& prng) {
  if (!(rate >= 0.0 && rate <= 1.0) ||
      rate * config.n > static_cast<double>(config.n - config.t) + 1e-9) {
    return MakeError(ErrorKind::kInfeasibleRate,
                     absl::StrCat("dropout rate ", rate, " with n=", config.n,
                                  " t=", config.t, " leaves fewer than t online"));
  }
  DropoutSchedule schedule;
  schedule.rate = rate;
  const uint64_t max_offline =
      static_cast<uint64_t>(std::floor(rate * config.n + 1e-9));
  std::vector<uint64_t> ids(config.n);
  for (uint64_t i = 0; i < config.n; ++i) ids[i] = i + 1;
  for (uint64_t k = 1; k <= config.iterations; ++k) {
    std::set<uint64_t>& offline = schedule.offline[k];
    if (max_offline == 0) continue;
    const uint64_t count = prng.UniformU64(max_offline + 1);
    std::vector<uint64_t> pool = ids;
    // Partial Fisher-Yates: the first `count` entries are a uniform subset.
    for (uint64_t i = 0; i < count; ++i) {
      const uint64_t j = i + prng.UniformU64(pool.size() - i);
      std::swap(pool[i], pool[j]);
      offline.insert(pool[i]);
    }
  }
  return schedule;
}

std::string_view AdversaryName(AdversaryKind kind) {
  switch (kind) {
    case AdversaryKind::kNone:
      return "none";
    case AdversaryKind::kPassive:
      return "passive";
    case AdversaryKind::kTamper:
      return "tamper";
  }
  return "none";
}

absl::StatusOr<AdversaryKind> ParseAdversary(std::string_view name) {
  if (name == "none") return AdversaryKind::kNone;
  if (name == "passive") return AdversaryKind::kPassive;
  if (name == "tamper") return AdversaryKind::kTamper;
  return MakeError(ErrorKind::kInvalidConfig,
                   absl::StrCat("unknown adversary ", std::string(name)));
}

const MetricsCell& Metrics::At(Role role, Phase phase, int round) const {
  static const MetricsCell kEmpty;
  auto it = cells.find({role, phase, round});
  return it == cells.end() ? kEmpty : it->second;
}

absl::StatusOr<RunOutcome> RunSimulation(const ProtocolConfig& config,
                                         const RunOptions& options) {
  SECLAB_RETURN_IF_ERROR(config.Validate());
  Prng dropout_prng = Prng::FromSeed(config.seed, "dropouts");
  SECLAB_ASSIGN_OR_RETURN(
      DropoutSchedule schedule,
      ScheduleDropouts(config, options.dropout_rate, dropout_prng));

  RunOutcome outcome;
  RunReport& report = outcome.report;
  report.config = config;
  report.dropout_rate = options.dropout_rate;
  report.adversary = options.adversary.kind;

  // Inputs for every (k, user), drawn up front so they do not depend on who
  // drops out.
  Prng input_prng = Prng::FromSeed(config.seed, "inputs");
  for (uint64_t k = 1; k <= config.iterations; ++k) {
    for (uint64_t i = 1; i <= config.n; ++i) {
      std::vector<uint64_t> x;
      if (options.inputs) {
        x = options.inputs(k, i, input_prng);
      } else {
        for (uint32_t m = 0; m < config.vector_len; ++m) {
          x.push_back(input_prng.UniformU64(config.MaxInput() + 1));
        }
      }
      report.inputs[i].push_back(std::move(x));
    }
  }

  // Signing identities are provisioned out of band.
  auto keys = std::make_shared<VerificationKeys>();
  std::vector<PartyIdentity> identities;
  for (uint64_t party = 0; party <= config.n; ++party) {
    Prng prng = Prng::FromSeed(config.seed, absl::StrCat("identity/", party));
    identities.push_back(MakeIdentity(prng));
    keys->schnorr[party] = identities.back().schnorr.pk;
    keys->multisig[party] = identities.back().multisig.pk;
  }
  Server server(config, identities[0], keys, Prng::FromSeed(config.seed, "server"));
  std::vector<User> users;
  users.reserve(config.n);
  for (uint64_t i = 1; i <= config.n; ++i) {
    users.emplace_back(i, config, identities[i], keys,
                       Prng::FromSeed(config.seed, absl::StrCat("user/", i)));
  }

  Bus bus(&outcome.transcript, &report.metrics);
  Metrics& metrics = report.metrics;

  // ---- Setup.
  auto user_setup = [&](int round, Inboxes& inboxes) {
    std::vector<std::vector<RoundMessage>> outs;
    for (User& u : users) {
      if (report.setup_user_aborts.contains(u.id())) continue;
      auto out = u.SetupStep(round, inboxes[u.id()]);
      Attribute(metrics, Role::kUser, Phase::kSetup, round, u.last_step_ops());
      if (!out.ok()) {
        report.setup_user_aborts[u.id()] = StatusLabel(out.status());
        continue;
      }
      outs.push_back(*std::move(out));
    }
    return Flatten(std::move(outs));
  };

  Inboxes none;
  Inboxes inboxes = bus.Deliver(user_setup(1, none), Phase::kSetup, 1);
  auto key_lists = server.SetupStep(1, inboxes[kServerId]);
  Attribute(metrics, Role::kServer, Phase::kSetup, 1, server.last_step_ops());
  if (key_lists.ok()) {
    inboxes = bus.Deliver(*std::move(key_lists), Phase::kSetup, 2);
    inboxes = bus.Deliver(user_setup(2, inboxes), Phase::kSetup, 2);
    auto deliveries = server.SetupStep(2, inboxes[kServerId]);
    Attribute(metrics, Role::kServer, Phase::kSetup, 2, server.last_step_ops());
    if (deliveries.ok()) {
      inboxes = bus.Deliver(*std::move(deliveries), Phase::kSetup, 3);
      user_setup(3, inboxes);
    } else {
      report.setup_abort = StatusLabel(deliveries.status());
    }
  } else {
    report.setup_abort = StatusLabel(key_lists.status());
  }
  report.setup_user_set.assign(server.user_set().begin(), server.user_set().end());

  // ---- Aggregation.
  Prng tamper_prng = Prng::FromSeed(config.seed, "tamper");
  const size_t element_width = ByteWidth(config.masking_group.p);
  for (uint64_t k = 1; k <= config.iterations && !report.setup_abort; ++k) {
    IterationRecord rec;
    rec.k = k;
    const std::set<uint64_t>& offline = schedule.offline[k];
    rec.scheduled_offline.assign(offline.begin(), offline.end());

    std::vector<RoundMessage> updates;
    for (User& u : users) {
      if (!u.setup_complete() || !server.user_set().contains(u.id()) ||
          offline.contains(u.id())) {
        continue;
      }
      auto msg = u.AggregationRound1(k, report.inputs[u.id()][k - 1]);
      Attribute(metrics, Role::kUser, Phase::kAggregation, 1, u.last_step_ops());
      if (!msg.ok()) {
        rec.user_aborts[u.id()] = StatusLabel(msg.status());
        continue;
      }
      rec.senders.push_back(u.id());
      updates.push_back(*std::move(msg));
    }

    if (options.adversary.kind == AdversaryKind::kTamper && !updates.empty()) {
      std::vector<TamperTarget> targets;
      for (const auto& t : options.adversary.targets) {
        if (t.k == k) targets.push_back(t);
      }
      if (options.adversary.targets.empty()) {
        TamperTarget t;
        t.k = k;
        t.user = updates[tamper_prng.UniformU64(updates.size())].sender;
        const size_t m = tamper_prng.UniformU64(config.vector_len);
        const size_t byte = tamper_prng.UniformU64(element_width);
        t.byte_offset = ElementByteOffset(m, byte, element_width);
        t.xor_mask = static_cast<uint8_t>(1u << tamper_prng.UniformU64(8));
        targets.push_back(t);
      }
      for (const auto& t : targets) {
        for (auto& msg : updates) {
          if (msg.sender != t.user || t.byte_offset >= msg.payload.size() ||
              t.xor_mask == 0) {
            continue;
          }
          msg.payload[t.byte_offset] ^= t.xor_mask;
          rec.tampered.push_back(t.user);
        }
      }
    }

    auto finish = [&](IterationRecord& r) {
      const std::vector<uint64_t>& basis = r.online.empty() ? r.senders : r.online;
      r.ground_truth.assign(config.vector_len, 0);
      for (uint64_t i : basis) {
        for (uint32_t m = 0; m < config.vector_len; ++m) {
          r.ground_truth[m] += report.inputs[i][k - 1][m];
        }
      }
      report.iterations.push_back(std::move(r));
    };

    inboxes = bus.Deliver(std::move(updates), Phase::kAggregation, 1);
    auto online_msgs = server.CollectRound1(k, inboxes[kServerId]);
    Attribute(metrics, Role::kServer, Phase::kAggregation, 1, server.last_step_ops());
    rec.online = server.online_set();
    rec.mac_rejected = server.mac_rejected();
    rec.malformed_rejected = server.malformed_rejected();
    if (!online_msgs.ok()) {
      rec.abort = StatusLabel(online_msgs.status());
      finish(rec);
      continue;
    }
    const bool malicious = config.mode == Mode::kMalicious;
    inboxes = bus.Deliver(*std::move(online_msgs), Phase::kAggregation,
                          malicious ? 2 : 3);

    auto user_round = [&](int round, Inboxes& in) {
      std::vector<std::vector<RoundMessage>> outs;
      for (User& u : users) {
        auto it = in.find(u.id());
        if (it == in.end()) continue;
        auto out = round == 2 ? u.AggregationRound2(k, it->second)
                              : u.AggregationRound3(k, it->second);
        Attribute(metrics, Role::kUser, Phase::kAggregation, round,
                  u.last_step_ops());
        if (!out.ok()) {
          rec.user_aborts[u.id()] = StatusLabel(out.status());
          continue;
        }
        outs.push_back(*std::move(out));
      }
      return Flatten(std::move(outs));
    };

    if (malicious) {
      inboxes = bus.Deliver(user_round(2, inboxes), Phase::kAggregation, 2);
      auto bundles = server.CollectRound2(k, inboxes[kServerId]);
      Attribute(metrics, Role::kServer, Phase::kAggregation, 2,
                server.last_step_ops());
      if (!bundles.ok()) {
        rec.abort = StatusLabel(bundles.status());
        finish(rec);
        continue;
      }
      inboxes = bus.Deliver(*std::move(bundles), Phase::kAggregation, 3);
    }
    inboxes = bus.Deliver(user_round(3, inboxes), Phase::kAggregation, 3);
    auto sums = server.Unmask(k, inboxes[kServerId]);
    Attribute(metrics, Role::kServer, Phase::kAggregation, 3, server.last_step_ops());
    rec.responders = server.responders();
    if (sums.ok()) {
      rec.output = *std::move(sums);
    } else {
      rec.abort = StatusLabel(sums.status());
    }
    finish(rec);
  }

  for (const User& u : users) outcome.secrets[u.id()] = u.secrets();
  report.transcript_sha256 =
      ToHex(Sha256(AsBytes(SerializeTranscript(outcome.transcript))));
  return outcome;
}

Json GroupParamsToJson(const GroupParams& params) {
  Json j;
  j["p"] = params.p.get_str();
  j["q"] = params.q.get_str();
  j["g"] = params.g.get_str();
  j["bits"] = params.bits;
  return j;
}

absl::StatusOr<GroupParams> GroupParamsFromJson(const Json& j) {
  try {
    return MakeGroupParams(mpz_class(j.at("p").get<std::string>()),
                           mpz_class(j.at("q").get<std::string>()),
                           mpz_class(j.at("g").get<std::string>()));
  } catch (const std::exception& e) {
    return MakeError(ErrorKind::kMalformedRecord,
                     absl::StrCat("bad group parameters: ", e.what()));
  }
}

Json ConfigToJson(const ProtocolConfig& config) {
  Json j;
  j["users"] = config.n;
  j["threshold"] = config.t;
  j["iterations"] = config.iterations;
  j["vector_len"] = config.vector_len;
  j["input_bits"] = config.input_bits;
  j["mode"] = std::string(ModeName(config.mode));
  j["variant"] = std::string(VariantName(config.variant));
  j["defenses"] = {{"mac_updates", config.defenses.mac_updates},
                   {"multisig", config.defenses.multisig}};
  j["masking_group"] = GroupParamsToJson(config.masking_group);
  j["seed"] = config.seed;
  j["hash"] = std::string(kHashIdentity);
  j["dlog_bound"] = config.DlogBound().get_str();
  j["input_encoding"] =
      "unsigned integers in [0, 2^input_bits); signed quantities are offset "
      "by 2^(input_bits - 1)";
  return j;
}

absl::StatusOr<ProtocolConfig> ConfigFromJson(const Json& j) {
  try {
    ProtocolConfig c;
    c.n = j.at("users").get<uint32_t>();
    c.t = j.at("threshold").get<uint32_t>();
    c.iterations = j.at("iterations").get<uint32_t>();
    c.vector_len = j.at("vector_len").get<uint32_t>();
    c.input_bits = j.at("input_bits").get<uint32_t>();
    SECLAB_ASSIGN_OR_RETURN(c.mode, ParseMode(j.at("mode").get<std::string>()));
    SECLAB_ASSIGN_OR_RETURN(c.variant,
                            ParseVariant(j.at("variant").get<std::string>()));
    c.defenses.mac_updates = j.at("defenses").at("mac_updates").get<bool>();
    c.defenses.multisig = j.at("defenses").at("multisig").get<bool>();
    SECLAB_ASSIGN_OR_RETURN(c.masking_group,
                            GroupParamsFromJson(j.at("masking_group")));
    c.seed = j.at("seed").get<uint64_t>();
    return c;
  } catch (const Json::exception& e) {
    return MakeError(ErrorKind::kMalformedRecord,
                     absl::StrCat("bad config header: ", e.what()));
  }
}

Json RunReport::ToJson() const {
  Json j;
  j["config"] = ConfigToJson(config);
  j["dropout_rate"] = dropout_rate;
  j["adversary"] = std::string(AdversaryName(adversary));
  Json setup;
  setup["status"] = setup_abort.value_or("ok");
  setup["user_set"] = IdsToJson(setup_user_set);
  Json aborts = Json::object();
  for (const auto& [id, why] : setup_user_aborts) aborts[std::to_string(id)] = why;
  setup["user_aborts"] = aborts;
  j["setup"] = setup;

  Json iters = Json::array();
  for (const auto& rec : iterations) {
    Json it;
    it["k"] = rec.k;
    it["status"] = rec.abort.value_or("ok");
    it["scheduled_offline"] = IdsToJson(rec.scheduled_offline);
    it["senders"] = IdsToJson(rec.senders);
    it["online"] = IdsToJson(rec.online);
    it["responders"] = IdsToJson(rec.responders);
    it["mac_rejected"] = IdsToJson(rec.mac_rejected);
    it["malformed_rejected"] = IdsToJson(rec.malformed_rejected);
    it["tampered"] = IdsToJson(rec.tampered);
    it["ground_truth"] = IdsToJson(rec.ground_truth);
    it["output"] = rec.output.has_value() ? IdsToJson(*rec.output) : Json(nullptr);
    it["correct"] = rec.correct();
    Json ua = Json::object();
    for (const auto& [id, why] : rec.user_aborts) ua[std::to_string(id)] = why;
    it["user_aborts"] = ua;
    iters.push_back(it);
  }
  j["iterations"] = iters;

  Json in = Json::object();
  for (const auto& [user, per_k] : inputs) {
    Json rows = Json::array();
    for (const auto& x : per_k) rows.push_back(IdsToJson(x));
    in[std::to_string(user)] = rows;
  }
  j["ground_truth_inputs"] = in;

  Json cells = Json::array();
  for (const auto& [key, cell] : metrics.cells) {
    const auto& [role, phase, round] = key;
    Json c;
    c["role"] = std::string(RoleName(role));
    c["phase"] = std::string(PhaseName(phase));
    c["round"] = round;
    c["activations"] = cell.activations;
    c["messages_sent"] = cell.messages_sent;
    c["bytes_sent"] = cell.bytes_sent;
    c["messages_received"] = cell.messages_received;
    c["bytes_received"] = cell.bytes_received;
    c["signature_verifications"] = cell.signature_verifications;
    c["group_exponentiations"] = cell.group_exponentiations;
    cells.push_back(c);
  }
  j["metrics"] = {{"cells", cells}, {"server_dlog_steps", metrics.dlog_steps}};
  j["transcript_sha256"] = transcript_sha256;
  if (!extra.is_null()) j["scenario"] = extra;
  return j;
}

}  // namespace seclab
