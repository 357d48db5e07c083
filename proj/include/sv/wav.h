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

#ifndef SV_WAV_H_
#define SV_WAV_H_

#include <string>
#include <vector>

namespace sv {

struct WavData {
  int sample_rate = 0;
  // Samples scaled to [-1, 1) from signed 16-bit.
  std::vector<double> samples;
};

// Reads a RIFF/WAVE file; only 16-bit signed little-endian mono PCM is
// accepted, anything else throws IoError.
WavData WavRead(const std::string& path);

// Writes samples as 16-bit mono PCM, clipping to [-1, 1).
void WavWrite(const std::string& path, const std::vector<double>& samples,
              int sample_rate);

}  // namespace sv

#endif  // SV_WAV_H_
