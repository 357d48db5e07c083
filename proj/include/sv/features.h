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

#ifndef SV_FEATURES_H_
#define SV_FEATURES_H_

#include <vector>

#include "sv/matrix.h"

namespace sv {

// Log floor applied to mel-band power before taking the log, and the lower
// clamp for spectral subtraction.
constexpr double kLogFloorEps = 1e-10;

struct FbankOptions {
  double frame_len_ms = 25.0;
  double hop_ms = 10.0;
  int n_mels = 40;
  double fmin_hz = 125.0;
  double fmax_hz = 7500.0;
  bool subtract_noise_floor = false;
};

// In-place radix-2 FFT, n must be a power of two.
void Fft(std::vector<double>& re, std::vector<double>& im, bool inverse = false);

int NextPowerOfTwo(int n);

// Splits pcm into Hann-windowed frames. Frame count is
// floor((len - frame) / hop) + 1; pcm shorter than one frame throws
// DegenerateInputError.
std::vector<std::vector<double>> FrameSignal(const std::vector<double>& pcm,
                                             int sample_rate,
                                             double frame_len_ms,
                                             double hop_ms);

// Unit-peak triangular filters with mel-spaced peaks, evaluated at FFT bin
// frequencies. Row f holds (bin, weight) pairs for filter f.
std::vector<std::vector<std::pair<int, double>>> BuildMelFilters(
    int n_fft, int sample_rate, int n_mels, double fmin_hz, double fmax_hz);

// Per-frame mel-band power through the triangular filters, then
// log(x + 1e-10). Output is frames x n_mels.
Matrix LogMelFilterbank(const std::vector<std::vector<double>>& frames,
                        int sample_rate, int n_mels, double fmin_hz,
                        double fmax_hz);

// Subtracts the per-dimension 10th-percentile value (noise-floor estimate)
// in the log domain, clamping results at log(1e-10).
Matrix SpectralSubtraction(const Matrix& fbank);

// Keeps the last t_fix frames, left-padding with zero frames when shorter.
Matrix ExtractLastWindow(const Matrix& fbank, int t_fix);

// Row-major flattening of a window into a (T*D)x1 column, frame 1 first.
Matrix StackFrames(const Matrix& window);

// Full pipeline: framing, log mel filterbank, optional noise-floor
// subtraction.
Matrix ComputeFbank(const std::vector<double>& pcm, int sample_rate,
                    const FbankOptions& options);

}  // namespace sv

#endif  // SV_FEATURES_H_
