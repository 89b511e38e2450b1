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

#include "seclab/sim/transcript.h"

#include <fstream>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "seclab/status.h"

namespace seclab {
namespace {

using Json = nlohmann::ordered_json;

absl::Status LineError(size_t line, absl::string_view what) {
  return MakeError(ErrorKind::kMalformedRecord,
                   absl::StrCat("line ", line, ": ", what));
}

absl::StatusOr<TranscriptRecord> ParseRecord(std::string_view line,
                                             size_t line_no) {
  Json j = Json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) return LineError(line_no, "not a JSON object");
  try {
    TranscriptRecord rec;
    rec.step = j.at("step").get<uint64_t>();
    rec.msg.k = j.at("k").get<uint64_t>();
    rec.msg.round = j.at("round").get<int>();
    rec.msg.sender = j.at("sender").get<uint64_t>();
    rec.msg.receiver = j.at("receiver").get<uint64_t>();
    auto type = ParseMsgType(j.at("msg_type").get<std::string>());
    if (!type.ok()) return LineError(line_no, type.status().message());
    rec.msg.type = *type;
    auto payload = FromHex(j.at("payload_hex").get<std::string>());
    if (!payload.ok()) return LineError(line_no, payload.status().message());
    rec.msg.payload = *std::move(payload);
    if (j.contains("mac_hex")) {
      auto mac = FromHex(j.at("mac_hex").get<std::string>());
      if (!mac.ok()) return LineError(line_no, mac.status().message());
      rec.msg.mac = MacTag{*std::move(mac)};
    }
    absl::Status valid = ValidatePayload(rec.msg.type, rec.msg.payload);
    if (!valid.ok()) return LineError(line_no, valid.message());
    return rec;
  } catch (const Json::exception& e) {
    return LineError(line_no, e.what());
  }
}

}  // namespace

std::string SerializeTranscript(const Transcript& transcript) {
  std::string out;
  for (const auto& rec : transcript.records) {
    Json j;
    j["step"] = rec.step;
    j["k"] = rec.msg.k;
    j["round"] = rec.msg.round;
    j["sender"] = rec.msg.sender;
    j["receiver"] = rec.msg.receiver;
    j["msg_type"] = std::string(MsgTypeName(rec.msg.type));
    j["payload_hex"] = ToHex(rec.msg.payload);
    if (rec.msg.mac.has_value()) j["mac_hex"] = ToHex(rec.msg.mac->bytes);
    out += j.dump();
    out += '\n';
  }
  return out;
}

absl::StatusOr<Transcript> ParseTranscript(std::string_view contents) {
  Transcript transcript;
  size_t line_no = 0;
  size_t pos = 0;
  while (pos < contents.size()) {
    ++line_no;
    size_t end = contents.find('\n', pos);
    if (end == std::string_view::npos) end = contents.size();
    std::string_view line = contents.substr(pos, end - pos);
    pos = end + 1;
    if (line.empty()) continue;
    SECLAB_ASSIGN_OR_RETURN(TranscriptRecord rec, ParseRecord(line, line_no));
    transcript.records.push_back(std::move(rec));
  }
  return transcript;
}

absl::Status WriteTranscript(const Transcript& transcript,
                             const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return absl::UnavailableError(absl::StrCat("cannot write ", path));
  out << SerializeTranscript(transcript);
  return out ? absl::OkStatus()
             : absl::UnavailableError(absl::StrCat("write failed: ", path));
}

absl::StatusOr<Transcript> ReplayTranscript(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseTranscript(buffer.str());
}

}  // namespace seclab
