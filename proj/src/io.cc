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

#include "sv/io.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "sv/common.h"

namespace sv {

void PutU32Le(std::string& out, uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

void PutF32Le(std::string& out, float v) {
  uint32_t bits;
  std::memcpy(&bits, &v, 4);
  PutU32Le(out, bits);
}

uint32_t GetU32Le(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

float GetF32Le(const uint8_t* p) {
  uint32_t bits = GetU32Le(p);
  float v;
  std::memcpy(&v, &bits, 4);
  return v;
}

std::vector<uint8_t> ReadFileBytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return std::vector<uint8_t>((std::istreambuf_iterator<char>(in)),
                              std::istreambuf_iterator<char>());
}

void WriteFileBytes(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path);
}

void FbnkWrite(const std::string& path, const Matrix& features) {
  if (features.rows < 1 || features.cols < 1)
    throw ContractError("FbnkWrite: empty matrix");
  std::string out;
  out.reserve(12 + features.data.size() * 4);
  out += "FBNK";
  PutU32Le(out, static_cast<uint32_t>(features.rows));
  PutU32Le(out, static_cast<uint32_t>(features.cols));
  for (double v : features.data) PutF32Le(out, static_cast<float>(v));
  WriteFileBytes(path, out);
}

Matrix FbnkRead(const std::string& path) {
  std::vector<uint8_t> bytes = ReadFileBytes(path);
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "FBNK", 4) != 0)
    throw IoError("FbnkRead: " + path + " is not an FBNK file");
  uint32_t rows = GetU32Le(&bytes[4]);
  uint32_t cols = GetU32Le(&bytes[8]);
  size_t need = 12 + static_cast<size_t>(rows) * cols * 4;
  if (rows == 0 || cols == 0 || bytes.size() != need)
    throw IoError("FbnkRead: " + path + " has inconsistent dimensions");
  Matrix m(static_cast<int>(rows), static_cast<int>(cols));
  for (size_t i = 0; i < m.data.size(); ++i)
    m.data[i] = static_cast<double>(GetF32Le(&bytes[12 + i * 4]));
  return m;
}

namespace {

std::vector<std::vector<std::string>> ReadTsv(const std::string& path,
                                              size_t n_fields,
                                              const char* what) {
  std::ifstream in(path);
  if (!in) throw IoError(std::string(what) + ": cannot open " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    size_t start = 0;
    while (true) {
      size_t tab = line.find('\t', start);
      if (tab == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    if (fields.size() != n_fields)
      throw IoError(std::string(what) + ": " + path + " line " +
                    std::to_string(line_no) + ": expected " +
                    std::to_string(n_fields) + " tab-separated fields, got " +
                    std::to_string(fields.size()));
    rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace

void ManifestWrite(const std::string& path,
                   const std::vector<ManifestEntry>& entries) {
  std::string out;
  for (const ManifestEntry& e : entries) {
    out += e.utt_id;
    out += '\t';
    out += e.speaker;
    out += '\t';
    out += e.path;
    out += '\n';
  }
  WriteFileBytes(path, out);
}

std::vector<ManifestEntry> ManifestRead(const std::string& path) {
  std::vector<ManifestEntry> entries;
  for (auto& row : ReadTsv(path, 3, "ManifestRead"))
    entries.push_back({std::move(row[0]), std::move(row[1]), std::move(row[2])});
  if (entries.empty()) throw IoError("ManifestRead: " + path + " is empty");
  return entries;
}

void TrialsWrite(const std::string& path,
                 const std::vector<TrialEntry>& trials) {
  std::string out;
  for (const TrialEntry& t : trials) {
    out += t.trial_id;
    out += '\t';
    out += t.test_utt;
    out += '\t';
    out += t.claimed_speaker;
    out += '\t';
    out += t.target ? "target" : "nontarget";
    out += '\n';
  }
  WriteFileBytes(path, out);
}

std::vector<TrialEntry> TrialsRead(const std::string& path) {
  std::vector<TrialEntry> trials;
  for (auto& row : ReadTsv(path, 4, "TrialsRead")) {
    TrialEntry t;
    t.trial_id = std::move(row[0]);
    t.test_utt = std::move(row[1]);
    t.claimed_speaker = std::move(row[2]);
    if (row[3] == "target") {
      t.target = true;
    } else if (row[3] == "nontarget") {
      t.target = false;
    } else {
      throw IoError("TrialsRead: " + path + ": bad label '" + row[3] + "'");
    }
    trials.push_back(std::move(t));
  }
  return trials;
}

std::string FormatScore(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9f", v);
  return buf;
}

void ScoresWrite(const std::string& path,
                 const std::vector<ScoreRecord>& records) {
  std::string out;
  for (const ScoreRecord& r : records) {
    out += r.trial_id;
    out += '\t';
    out += FormatScore(r.raw);
    out += '\t';
    out += r.has_tnorm ? FormatScore(r.tnorm) : "-";
    out += '\t';
    out += r.target ? "target" : "nontarget";
    out += '\n';
  }
  WriteFileBytes(path, out);
}

void TrainLogWrite(const std::string& path,
                   const std::vector<std::pair<int, double>>& log) {
  std::string out;
  for (const auto& [step, loss] : log) {
    out += std::to_string(step);
    out += '\t';
    out += FormatScore(loss);
    out += '\n';
  }
  WriteFileBytes(path, out);
}

}  // namespace sv
