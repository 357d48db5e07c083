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

#ifndef SV_DATASET_H_
#define SV_DATASET_H_

#include <map>
#include <string>
#include <vector>

#include "sv/matrix.h"

namespace sv {

struct Utterance {
  std::string id;
  std::string speaker;
  Matrix features;
};

// In-memory utterance collection with a dense, sorted speaker index.
class Dataset {
 public:
  explicit Dataset(std::vector<Utterance> utts);
  static Dataset FromManifest(const std::string& manifest_path);

  const std::vector<Utterance>& utts() const { return utts_; }
  const Utterance& utt(int i) const { return utts_[i]; }
  int size() const { return static_cast<int>(utts_.size()); }

  // Speaker ids sorted ascending; positions define the dense index.
  const std::vector<std::string>& speakers() const { return speakers_; }
  int NumSpeakers() const { return static_cast<int>(speakers_.size()); }
  int SpeakerIndex(const std::string& speaker) const;
  const std::vector<int>& SpeakerUtts(const std::string& speaker) const;

 private:
  std::vector<Utterance> utts_;
  std::vector<std::string> speakers_;
  std::map<std::string, std::vector<int>> by_speaker_;
};

}  // namespace sv

#endif  // SV_DATASET_H_
