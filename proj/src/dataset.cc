// Copyright 2026 The svkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sv/dataset.h"

#include <algorithm>
#include <set>

#include "sv/common.h"
#include "sv/io.h"

namespace sv {

Dataset::Dataset(std::vector<Utterance> utts) : utts_(std::move(utts)) {
  if (utts_.empty()) throw ContractError("Dataset: no utterances");
  std::set<std::string> ids;
  for (int i = 0; i < static_cast<int>(utts_.size()); ++i) {
    const Utterance& u = utts_[i];
    if (!ids.insert(u.id).second)
      throw ContractError("Dataset: duplicate utterance id " + u.id);
    by_speaker_[u.speaker].push_back(i);
  }
  for (const auto& [speaker, indices] : by_speaker_)
    speakers_.push_back(speaker);
}

Dataset Dataset::FromManifest(const std::string& manifest_path) {
  std::vector<Utterance> utts;
  for (const ManifestEntry& e : ManifestRead(manifest_path)) {
    Utterance u;
    u.id = e.utt_id;
    u.speaker = e.speaker;
    u.features = FbnkRead(e.path);
    utts.push_back(std::move(u));
  }
  return Dataset(std::move(utts));
}

int Dataset::SpeakerIndex(const std::string& speaker) const {
  auto it = std::lower_bound(speakers_.begin(), speakers_.end(), speaker);
  if (it == speakers_.end() || *it != speaker)
    throw ContractError("Dataset: unknown speaker " + speaker);
  return static_cast<int>(it - speakers_.begin());
}

const std::vector<int>& Dataset::SpeakerUtts(const std::string& speaker) const {
  auto it = by_speaker_.find(speaker);
  if (it == by_speaker_.end())
    throw ContractError("Dataset: unknown speaker " + speaker);
  return it->second;
}

}  // namespace sv
