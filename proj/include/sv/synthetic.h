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

#ifndef SV_SYNTHETIC_H_
#define SV_SYNTHETIC_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sv/io.h"
#include "sv/matrix.h"

namespace sv {

struct SynthConfig {
  int speakers_train = 64;
  int speakers_heldout = 16;
  int utts_per_speaker = 20;
  int frames = 80;       // T
  int feat_dim = 8;      // D
  int latent_dim = 4;    // L
  double noise = 0.3;    // sigma_n
  // Per-utterance structured nuisance strength, relative to noise. Nuisance
  // lives in the subspace orthogonal to the identity map so that identity
  // stays linearly decodable while raw feature-space similarity does not
  // separate speakers.
  double nuisance_scale = 10.0;
  uint64_t seed = 1;
};

struct SyntheticUtterance {
  std::string utt_id;
  std::string speaker;
  Matrix features;  // frames x feat_dim
};

struct SyntheticCorpus {
  SynthConfig config;
  std::vector<std::string> train_speakers;
  std::vector<std::string> heldout_speakers;
  std::vector<SyntheticUtterance> train;
  std::vector<SyntheticUtterance> heldout;
  // True latent identity vectors, for the oracle.
  std::map<std::string, Matrix> speaker_latents;
};

// Frame t of utterance u for speaker s is
//   p_t * (A v_s + kappa * sigma_n * B g_u) + sigma_n * eps_{u,t}
// where [A|B] are orthonormal columns shared corpus-wide, v_s and g_u are
// unit-sphere latents, and p_t is a smooth envelope in [0.5, 1.5] shared
// across speakers (the fixed-phrase structure). Pure function of the config.
SyntheticCorpus GenerateCorpus(const SynthConfig& config);

// Scores each trial with the cosine of the true latent vectors (test
// utterance's speaker vs claimed speaker); returns that score set's EER.
// A lower-bound reference for trained systems.
double OracleEer(const SyntheticCorpus& corpus,
                 const std::vector<TrialEntry>& trials);

struct CorpusFiles {
  std::string train_manifest;
  std::string enroll_manifest;
  std::string test_manifest;
  std::string trials;
};

// Writes FBNK feature files plus train/enroll/test manifests and the
// held-out all-pairs trial list. The first enroll_count utterances of each
// held-out speaker enroll; the rest are tests.
CorpusFiles WriteCorpus(const SyntheticCorpus& corpus,
                        const std::string& out_dir, int enroll_count);

}  // namespace sv

#endif  // SV_SYNTHETIC_H_
