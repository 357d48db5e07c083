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

#ifndef SV_IO_H_
#define SV_IO_H_

#include <cstdint>
#include <string>
#include <vector>

#include "sv/matrix.h"

namespace sv {

// Feature file: magic "FBNK", u32 LE rows, u32 LE cols, then rows*cols
// float32 LE row-major.
void FbnkWrite(const std::string& path, const Matrix& features);
Matrix FbnkRead(const std::string& path);

struct ManifestEntry {
  std::string utt_id;
  std::string speaker;
  std::string path;
};

// Manifest TSV: utterance_id<TAB>speaker_id<TAB>feature_file_path.
void ManifestWrite(const std::string& path,
                   const std::vector<ManifestEntry>& entries);
std::vector<ManifestEntry> ManifestRead(const std::string& path);

struct TrialEntry {
  std::string trial_id;
  std::string test_utt;
  std::string claimed_speaker;
  bool target = false;
};

// Trial TSV: trial_id<TAB>test_utterance_id<TAB>claimed_speaker_id<TAB>label.
void TrialsWrite(const std::string& path,
                 const std::vector<TrialEntry>& trials);
std::vector<TrialEntry> TrialsRead(const std::string& path);

struct ScoreRecord {
  std::string trial_id;
  double raw = 0.0;
  bool has_tnorm = false;
  double tnorm = 0.0;
  bool target = false;
};

// Score TSV: trial_id<TAB>raw<TAB>tnorm_or_dash<TAB>label.
void ScoresWrite(const std::string& path,
                 const std::vector<ScoreRecord>& records);

// Training log TSV: step<TAB>loss.
void TrainLogWrite(const std::string& path,
                   const std::vector<std::pair<int, double>>& log);

// Low-level helpers shared by the binary formats.
void PutU32Le(std::string& out, uint32_t v);
void PutF32Le(std::string& out, float v);
uint32_t GetU32Le(const uint8_t* p);
float GetF32Le(const uint8_t* p);
std::vector<uint8_t> ReadFileBytes(const std::string& path);
void WriteFileBytes(const std::string& path, const std::string& bytes);
std::string FormatScore(double v);

}  // namespace sv

#endif  // SV_IO_H_
