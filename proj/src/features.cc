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

#include "sv/features.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "sv/common.h"

namespace sv {

namespace {

constexpr double kPi = 3.14159265358979323846;

double HzToMel(double hz) { return 1127.0 * std::log1p(hz / 700.0); }

}  // namespace

int NextPowerOfTwo(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

void Fft(std::vector<double>& re, std::vector<double>& im, bool inverse) {
  size_t n = re.size();
  if (n != im.size() || n == 0 || (n & (n - 1)) != 0)
    throw ContractError("Fft: size must be a power of two");
  // Bit-reversal permutation.
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) {
      std::swap(re[i], re[j]);
      std::swap(im[i], im[j]);
    }
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    double ang = 2.0 * kPi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
    double wr = std::cos(ang), wi = std::sin(ang);
    for (size_t i = 0; i < n; i += len) {
      double cr = 1.0, ci = 0.0;
      for (size_t k = 0; k < len / 2; ++k) {
        size_t a = i + k, b = i + k + len / 2;
        double tr = re[b] * cr - im[b] * ci;
        double ti = re[b] * ci + im[b] * cr;
        re[b] = re[a] - tr;
        im[b] = im[a] - ti;
        re[a] += tr;
        im[a] += ti;
        double ncr = cr * wr - ci * wi;
        ci = cr * wi + ci * wr;
        cr = ncr;
      }
    }
  }
  if (inverse) {
    for (size_t i = 0; i < n; ++i) {
      re[i] /= static_cast<double>(n);
      im[i] /= static_cast<double>(n);
    }
  }
}

std::vector<std::vector<double>> FrameSignal(const std::vector<double>& pcm,
                                             int sample_rate,
                                             double frame_len_ms,
                                             double hop_ms) {
  if (sample_rate <= 0) throw ContractError("FrameSignal: sample rate <= 0");
  int frame_len =
      static_cast<int>(std::lround(frame_len_ms * sample_rate / 1000.0));
  int hop = static_cast<int>(std::lround(hop_ms * sample_rate / 1000.0));
  if (frame_len <= 0 || hop <= 0)
    throw ContractError("FrameSignal: frame or hop rounds to zero samples");
  if (static_cast<int>(pcm.size()) < frame_len)
    throw DegenerateInputError("FrameSignal: signal of " +
                               std::to_string(pcm.size()) +
                               " samples is shorter than one frame (" +
                               std::to_string(frame_len) + ")");
  int n_frames = (static_cast<int>(pcm.size()) - frame_len) / hop + 1;
  // Periodic Hann window.
  std::vector<double> window(frame_len);
  for (int i = 0; i < frame_len; ++i)
    window[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * i / frame_len);
  std::vector<std::vector<double>> frames(n_frames);
  for (int t = 0; t < n_frames; ++t) {
    frames[t].resize(frame_len);
    const double* src = pcm.data() + static_cast<size_t>(t) * hop;
    for (int i = 0; i < frame_len; ++i) frames[t][i] = src[i] * window[i];
  }
  return frames;
}

std::vector<std::vector<std::pair<int, double>>> BuildMelFilters(
    int n_fft, int sample_rate, int n_mels, double fmin_hz, double fmax_hz) {
  if (n_mels < 1) throw ContractError("BuildMelFilters: n_mels < 1");
  if (!(fmin_hz >= 0.0) || !(fmax_hz > fmin_hz) ||
      fmax_hz > sample_rate / 2.0 + 1e-9)
    throw ConfigError("BuildMelFilters: invalid band edges");
  double mel_lo = HzToMel(fmin_hz);
  double mel_hi = HzToMel(fmax_hz);
  std::vector<double> peaks(n_mels + 2);
  for (int i = 0; i < n_mels + 2; ++i)
    peaks[i] = mel_lo + (mel_hi - mel_lo) * i / (n_mels + 1);

  int n_bins = n_fft / 2 + 1;
  std::vector<std::vector<std::pair<int, double>>> filters(n_mels);
  for (int f = 0; f < n_mels; ++f) {
    double left = peaks[f], center = peaks[f + 1], right = peaks[f + 2];
    for (int k = 0; k < n_bins; ++k) {
      double mel_k =
          HzToMel(static_cast<double>(k) * sample_rate / n_fft);
      if (mel_k <= left || mel_k >= right) continue;
      double w = mel_k <= center ? (mel_k - left) / (center - left)
                                 : (right - mel_k) / (right - center);
      filters[f].emplace_back(k, w);
    }
  }
  return filters;
}

Matrix LogMelFilterbank(const std::vector<std::vector<double>>& frames,
                        int sample_rate, int n_mels, double fmin_hz,
                        double fmax_hz) {
  if (frames.empty())
    throw DegenerateInputError("LogMelFilterbank: no frames");
  int frame_len = static_cast<int>(frames[0].size());
  int n_fft = NextPowerOfTwo(frame_len);
  auto filters = BuildMelFilters(n_fft, sample_rate, n_mels, fmin_hz, fmax_hz);

  Matrix out(static_cast<int>(frames.size()), n_mels);
  std::vector<double> re(n_fft), im(n_fft);
  std::vector<double> power(n_fft / 2 + 1);
  for (size_t t = 0; t < frames.size(); ++t) {
    std::fill(re.begin(), re.end(), 0.0);
    std::fill(im.begin(), im.end(), 0.0);
    std::copy(frames[t].begin(), frames[t].end(), re.begin());
    Fft(re, im);
    for (int k = 0; k <= n_fft / 2; ++k)
      power[k] = re[k] * re[k] + im[k] * im[k];
    for (int f = 0; f < n_mels; ++f) {
      double e = 0.0;
      for (const auto& [bin, w] : filters[f]) e += w * power[bin];
      out(static_cast<int>(t), f) = std::log(e + kLogFloorEps);
    }
  }
  return out;
}

Matrix SpectralSubtraction(const Matrix& fbank) {
  if (fbank.rows < 1) throw DegenerateInputError("SpectralSubtraction: empty");
  Matrix out(fbank.rows, fbank.cols);
  double clamp = std::log(kLogFloorEps);
  std::vector<double> column(fbank.rows);
  for (int d = 0; d < fbank.cols; ++d) {
    for (int t = 0; t < fbank.rows; ++t) column[t] = fbank(t, d);
    std::sort(column.begin(), column.end());
    // 10th percentile with linear interpolation between closest ranks.
    double pos = 0.1 * (fbank.rows - 1);
    int lo = static_cast<int>(pos);
    double frac = pos - lo;
    double floor_est = column[lo];
    if (lo + 1 < fbank.rows)
      floor_est += frac * (column[lo + 1] - column[lo]);
    for (int t = 0; t < fbank.rows; ++t)
      out(t, d) = std::max(fbank(t, d) - floor_est, clamp);
  }
  return out;
}

Matrix ExtractLastWindow(const Matrix& fbank, int t_fix) {
  if (t_fix < 1) throw ContractError("ExtractLastWindow: t_fix < 1");
  if (fbank.rows < 1) throw DegenerateInputError("ExtractLastWindow: empty");
  Matrix out(t_fix, fbank.cols);
  int pad = std::max(0, t_fix - fbank.rows);
  int src0 = std::max(0, fbank.rows - t_fix);
  for (int t = pad; t < t_fix; ++t)
    for (int d = 0; d < fbank.cols; ++d)
      out(t, d) = fbank(src0 + (t - pad), d);
  return out;
}

Matrix StackFrames(const Matrix& window) {
  Matrix out(window.rows * window.cols, 1);
  out.data = window.data;
  return out;
}

Matrix ComputeFbank(const std::vector<double>& pcm, int sample_rate,
                    const FbankOptions& options) {
  auto frames =
      FrameSignal(pcm, sample_rate, options.frame_len_ms, options.hop_ms);
  Matrix fbank = LogMelFilterbank(frames, sample_rate, options.n_mels,
                                  options.fmin_hz, options.fmax_hz);
  if (options.subtract_noise_floor) fbank = SpectralSubtraction(fbank);
  return fbank;
}

}  // namespace sv
