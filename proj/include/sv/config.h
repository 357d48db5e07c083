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

#ifndef SV_CONFIG_H_
#define SV_CONFIG_H_

#include <set>
#include <string>

#include "sv/features.h"
#include "sv/network.h"
#include "sv/synthetic.h"
#include "sv/train.h"

namespace sv {

// Flat key=value experiment configuration. `#` starts a comment, blank lines
// are skipped, unknown and duplicate keys are rejected. The `seed` key sets
// both the synthesis and the training seed.
struct ExperimentConfig {
  SynthConfig synth;
  FbankOptions fbank;
  NetConfig net;
  TrainConfig train;
  int eval_enroll_count = 5;
  int eval_enroll_max = 9;

  // Keys present in the parsed file, for "was it set" checks.
  std::set<std::string> seen;

  bool Has(const std::string& key) const { return seen.count(key) > 0; }
  void SetSeed(uint64_t seed) {
    synth.seed = seed;
    train.seed = seed;
  }
};

ExperimentConfig ParseExperimentConfig(const std::string& text);
ExperimentConfig LoadExperimentConfig(const std::string& path);

}  // namespace sv

#endif  // SV_CONFIG_H_
