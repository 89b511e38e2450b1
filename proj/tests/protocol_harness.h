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

#ifndef SECLAB_TESTS_PROTOCOL_HARNESS_H_
#define SECLAB_TESTS_PROTOCOL_HARNESS_H_

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <vector>

#include "absl/strings/str_cat.h"
#include "seclab/protocol/server.h"
#include "seclab/protocol/user.h"

namespace seclab::testing {

using Inbox = std::map<uint64_t, std::vector<RoundMessage>>;
using Mutator = std::function<void(std::vector<RoundMessage>&)>;

inline Inbox Route(std::vector<RoundMessage> msgs) {
  Inbox inbox;
  for (auto& m : msgs) inbox[m.receiver].push_back(std::move(m));
  return inbox;
}

// Drives one server and n users by hand so tests can drop, silence or mutate
// messages between rounds.
class Harness {
 public:
  explicit Harness(ProtocolConfig config) : config_(std::move(config)) {
    auto keys = std::make_shared<VerificationKeys>();
    for (uint64_t party = 0; party <= config_.n; ++party) {
      Prng prng = Prng::FromSeed(config_.seed, absl::StrCat("identity/", party));
      identities_.push_back(MakeIdentity(prng));
      keys->schnorr[party] = identities_.back().schnorr.pk;
      keys->multisig[party] = identities_.back().multisig.pk;
    }
    keys_ = keys;
    server_ = std::make_unique<Server>(config_, identities_[0], keys_,
                                       Prng::FromSeed(config_.seed, "server"));
    for (uint64_t i = 1; i <= config_.n; ++i) {
      users_.emplace_back(i, config_, identities_[i], keys_,
                          Prng::FromSeed(config_.seed, absl::StrCat("user/", i)));
    }
  }

  User& user(uint64_t id) { return users_.at(id - 1); }
  Server& server() { return *server_; }
  const ProtocolConfig& config() const { return config_; }
  const std::map<uint64_t, absl::Status>& user_errors() const { return user_errors_; }

  // Runs all setup rounds. `silent` users send nothing in round 1. Each hook
  // may rewrite the messages of the corresponding hop.
  absl::Status RunSetup(std::set<uint64_t> silent = {}, Mutator user_r1 = {},
                        Mutator server_r1 = {}, Mutator user_r2 = {},
                        Mutator server_r2 = {}) {
    user_errors_.clear();
    std::vector<RoundMessage> up;
    for (User& u : users_) {
      if (silent.contains(u.id())) continue;
      Collect(u.id(), u.SetupStep(1, {}), up);
    }
    if (user_r1) user_r1(up);
    Inbox in = Route(std::move(up));
    auto lists = server_->SetupStep(1, in[kServerId]);
    if (!lists.ok()) return lists.status();
    if (server_r1) server_r1(*lists);
    in = Route(*std::move(lists));
    up.clear();
    for (User& u : users_) {
      if (!in.contains(u.id())) continue;
      Collect(u.id(), u.SetupStep(2, in[u.id()]), up);
    }
    if (user_r2) user_r2(up);
    in = Route(std::move(up));
    auto deliveries = server_->SetupStep(2, in[kServerId]);
    if (!deliveries.ok()) return deliveries.status();
    if (server_r2) server_r2(*deliveries);
    in = Route(*std::move(deliveries));
    for (User& u : users_) {
      if (!in.contains(u.id()) || user_errors_.contains(u.id())) continue;
      std::vector<RoundMessage> none;
      Collect(u.id(), u.SetupStep(3, in[u.id()]), none);
    }
    return absl::OkStatus();
  }

  struct IterationResult {
    absl::StatusOr<std::vector<uint64_t>> output = absl::UnknownError("not run");
    std::map<uint64_t, absl::Status> user_errors;
  };

  // One aggregation iteration with the given inputs (users absent from the
  // map are offline). Hooks run on the user -> server hops.
  IterationResult RunIteration(uint64_t k,
                               const std::map<uint64_t, std::vector<uint64_t>>& inputs,
                               Mutator round1 = {}, Mutator server_r1 = {},
                               Mutator server_r2 = {}, Mutator round3 = {}) {
    IterationResult result;
    user_errors_.clear();
    std::vector<RoundMessage> up;
    for (const auto& [id, x] : inputs) {
      auto msg = user(id).AggregationRound1(k, x);
      if (msg.ok()) {
        up.push_back(*std::move(msg));
      } else {
        user_errors_[id] = msg.status();
      }
    }
    if (round1) round1(up);
    Inbox in = Route(std::move(up));
    auto online = server_->CollectRound1(k, in[kServerId]);
    if (!online.ok()) {
      result.output = online.status();
      result.user_errors = user_errors_;
      return result;
    }
    if (server_r1) server_r1(*online);
    in = Route(*std::move(online));
    if (config_.mode == Mode::kMalicious) {
      up.clear();
      for (auto& [id, msgs] : in) {
        if (id == kServerId) continue;
        Collect(id, user(id).AggregationRound2(k, msgs), up);
      }
      in = Route(std::move(up));
      auto bundles = server_->CollectRound2(k, in[kServerId]);
      if (!bundles.ok()) {
        result.output = bundles.status();
        result.user_errors = user_errors_;
        return result;
      }
      if (server_r2) server_r2(*bundles);
      in = Route(*std::move(bundles));
    }
    up.clear();
    for (auto& [id, msgs] : in) {
      if (id == kServerId) continue;
      Collect(id, user(id).AggregationRound3(k, msgs), up);
    }
    if (round3) round3(up);
    in = Route(std::move(up));
    result.output = server_->Unmask(k, in[kServerId]);
    result.user_errors = user_errors_;
    return result;
  }

 private:
  void Collect(uint64_t id, absl::StatusOr<std::vector<RoundMessage>> out,
               std::vector<RoundMessage>& sink) {
    if (!out.ok()) {
      user_errors_[id] = out.status();
      return;
    }
    for (auto& m : *out) sink.push_back(std::move(m));
  }

  ProtocolConfig config_;
  std::vector<PartyIdentity> identities_;
  std::shared_ptr<const VerificationKeys> keys_;
  std::unique_ptr<Server> server_;
  std::vector<User> users_;
  std::map<uint64_t, absl::Status> user_errors_;
};

}  // namespace seclab::testing

#endif  // SECLAB_TESTS_PROTOCOL_HARNESS_H_
