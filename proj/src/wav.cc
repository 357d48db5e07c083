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

#include "sv/wav.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "sv/common.h"

namespace sv {

namespace {

uint32_t ReadU32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t ReadU16(const uint8_t* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void PutU32(std::string& s, uint32_t v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>((v >> 8) & 0xff));
  s.push_back(static_cast<char>((v >> 16) & 0xff));
  s.push_back(static_cast<char>((v >> 24) & 0xff));
}

void PutU16(std::string& s, uint16_t v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>((v >> 8) & 0xff));
}

}  // namespace

WavData WavRead(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("WavRead: cannot open " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw IoError("WavRead: " + path + " is not a RIFF/WAVE file");

  WavData wav;
  bool have_fmt = false, have_data = false;
  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const uint8_t* hdr = bytes.data() + pos;
    uint32_t chunk_size = ReadU32(hdr + 4);
    size_t body = pos + 8;
    if (body + chunk_size > bytes.size())
      throw IoError("WavRead: truncated chunk in " + path);
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      if (chunk_size < 16) throw IoError("WavRead: malformed fmt chunk");
      uint16_t format = ReadU16(&bytes[body]);
      uint16_t channels = ReadU16(&bytes[body + 2]);
      uint32_t rate = ReadU32(&bytes[body + 4]);
      uint16_t bits = ReadU16(&bytes[body + 14]);
      if (format != 1 || channels != 1 || bits != 16)
        throw IoError("WavRead: " + path +
                      ": only 16-bit mono PCM is supported");
      wav.sample_rate = static_cast<int>(rate);
      have_fmt = true;
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      if (!have_fmt) throw IoError("WavRead: data chunk before fmt");
      size_t n = chunk_size / 2;
      wav.samples.resize(n);
      for (size_t i = 0; i < n; ++i) {
        int16_t s = static_cast<int16_t>(ReadU16(&bytes[body + 2 * i]));
        wav.samples[i] = static_cast<double>(s) / 32768.0;
      }
      have_data = true;
    }
    pos = body + chunk_size + (chunk_size & 1);
  }
  if (!have_fmt || !have_data)
    throw IoError("WavRead: " + path + " is missing fmt or data chunk");
  return wav;
}

void WavWrite(const std::string& path, const std::vector<double>& samples,
              int sample_rate) {
  if (sample_rate <= 0) throw ContractError("WavWrite: sample rate <= 0");
  std::string out;
  uint32_t data_bytes = static_cast<uint32_t>(samples.size() * 2);
  out.reserve(44 + data_bytes);
  out += "RIFF";
  PutU32(out, 36 + data_bytes);
  out += "WAVEfmt ";
  PutU32(out, 16);
  PutU16(out, 1);  // PCM
  PutU16(out, 1);  // mono
  PutU32(out, static_cast<uint32_t>(sample_rate));
  PutU32(out, static_cast<uint32_t>(sample_rate) * 2);
  PutU16(out, 2);
  PutU16(out, 16);
  out += "data";
  PutU32(out, data_bytes);
  for (double v : samples) {
    double clipped = std::min(std::max(v, -1.0), 32767.0 / 32768.0);
    int16_t s = static_cast<int16_t>(std::lrint(clipped * 32768.0));
    PutU16(out, static_cast<uint16_t>(s));
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("WavWrite: cannot open " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("WavWrite: write failed for " + path);
}

}  // namespace sv
