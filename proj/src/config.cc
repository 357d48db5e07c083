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

#include "sv/config.h"

#include <cstdint>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

#include "sv/common.h"
#include "sv/io.h"

namespace sv {
namespace {

std::string Trim(const std::string& s) {
  size_t begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  size_t end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void BadValue(const std::string& key, const std::string& value,
                           const char* expected) {
  throw ConfigError("config key " + key + ": expected " + expected +
                    ", got '" + value + "'");
}

long long ParseInt(const std::string& key, const std::string& value) {
  size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(value, &pos);
  } catch (const std::exception&) {
    BadValue(key, value, "an integer");
  }
  if (pos != value.size()) BadValue(key, value, "an integer");
  return v;
}

double ParseReal(const std::string& key, const std::string& value) {
  size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(value, &pos);
  } catch (const std::exception&) {
    BadValue(key, value, "a number");
  }
  if (pos != value.size()) BadValue(key, value, "a number");
  return v;
}

bool ParseBool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  BadValue(key, value, "a boolean (true|false|1|0)");
}

std::vector<int> ParseIntList(const std::string& key,
                              const std::string& value) {
  std::vector<int> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(static_cast<int>(ParseInt(key, Trim(item))));
  if (out.empty()) BadValue(key, value, "a comma-separated integer list");
  return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&,
                                  const std::string&)>;

const std::map<std::string, Setter>& KeyTable() {
  auto i = [](auto member) {
    return [member](ExperimentConfig& c, const std::string& k,
                    const std::string& v) {
      *member(c) = static_cast<int>(ParseInt(k, v));
    };
  };
  auto r = [](auto member) {
    return [member](ExperimentConfig& c, const std::string& k,
                    const std::string& v) { *member(c) = ParseReal(k, v); };
  };
  static const std::map<std::string, Setter> table = {
      {"seed",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.SetSeed(static_cast<uint64_t>(ParseInt(k, v)));
       }},
      {"synth_speakers_train",
       i([](ExperimentConfig& c) { return &c.synth.speakers_train; })},
      {"synth_speakers_heldout",
       i([](ExperimentConfig& c) { return &c.synth.speakers_heldout; })},
      {"synth_utts_per_speaker",
       i([](ExperimentConfig& c) { return &c.synth.utts_per_speaker; })},
      {"synth_frames", i([](ExperimentConfig& c) { return &c.synth.frames; })},
      {"synth_feat_dim",
       i([](ExperimentConfig& c) { return &c.synth.feat_dim; })},
      {"synth_latent_dim",
       i([](ExperimentConfig& c) { return &c.synth.latent_dim; })},
      {"synth_noise", r([](ExperimentConfig& c) { return &c.synth.noise; })},
      {"synth_nuisance_scale",
       r([](ExperimentConfig& c) { return &c.synth.nuisance_scale; })},
      {"feat_frame_len_ms",
       r([](ExperimentConfig& c) { return &c.fbank.frame_len_ms; })},
      {"feat_hop_ms", r([](ExperimentConfig& c) { return &c.fbank.hop_ms; })},
      {"feat_n_mels", i([](ExperimentConfig& c) { return &c.fbank.n_mels; })},
      {"feat_fmin_hz", r([](ExperimentConfig& c) { return &c.fbank.fmin_hz; })},
      {"feat_fmax_hz", r([](ExperimentConfig& c) { return &c.fbank.fmax_hz; })},
      {"feat_subtract_noise_floor",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.fbank.subtract_noise_floor = ParseBool(k, v);
       }},
      {"net",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         (void)k;
         c.net.kind = NetKindFromString(v);
       }},
      {"net_feat_dim", i([](ExperimentConfig& c) { return &c.net.feat_dim; })},
      {"net_window_frames",
       i([](ExperimentConfig& c) { return &c.net.window_frames; })},
      {"net_patch_rows",
       i([](ExperimentConfig& c) { return &c.net.patch_rows; })},
      {"net_patch_cols",
       i([](ExperimentConfig& c) { return &c.net.patch_cols; })},
      {"net_patch_units",
       i([](ExperimentConfig& c) { return &c.net.patch_units; })},
      {"net_dnn_hidden",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.net.dnn_hidden = ParseIntList(k, v);
       }},
      {"net_rep_dim", i([](ExperimentConfig& c) { return &c.net.rep_dim; })},
      {"net_context", i([](ExperimentConfig& c) { return &c.net.context; })},
      {"net_dvector_hidden",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.net.dvector_hidden = ParseIntList(k, v);
       }},
      {"net_lstm_hidden",
       i([](ExperimentConfig& c) { return &c.net.lstm_hidden; })},
      {"train_loss",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         if (v != "e2e" && v != "softmax")
           throw ConfigError("config key " + k +
                             ": expected e2e or softmax, got '" + v + "'");
         c.train.loss = v;
       }},
      {"train_n_enroll",
       i([](ExperimentConfig& c) { return &c.train.n_enroll; })},
      {"train_batch_size",
       i([](ExperimentConfig& c) { return &c.train.batch_size; })},
      {"train_learning_rate",
       r([](ExperimentConfig& c) { return &c.train.learning_rate; })},
      {"train_momentum",
       r([](ExperimentConfig& c) { return &c.train.momentum; })},
      {"train_steps", i([](ExperimentConfig& c) { return &c.train.steps; })},
      {"train_target_ratio",
       r([](ExperimentConfig& c) { return &c.train.target_ratio; })},
      {"train_pool_capacity",
       i([](ExperimentConfig& c) { return &c.train.pool_capacity; })},
      {"train_pool_refresh_period",
       i([](ExperimentConfig& c) { return &c.train.pool_refresh_period; })},
      {"train_softmax_candidates",
       i([](ExperimentConfig& c) { return &c.train.softmax_candidates; })},
      {"train_dropout", r([](ExperimentConfig& c) { return &c.train.dropout; })},
      {"train_e2e_init_w",
       r([](ExperimentConfig& c) { return &c.train.e2e_init_w; })},
      {"train_e2e_init_b",
       r([](ExperimentConfig& c) { return &c.train.e2e_init_b; })},
      {"eval_enroll_count",
       i([](ExperimentConfig& c) { return &c.eval_enroll_count; })},
      {"eval_enroll_max",
       i([](ExperimentConfig& c) { return &c.eval_enroll_max; })},
  };
  return table;
}

}  // namespace

ExperimentConfig ParseExperimentConfig(const std::string& text) {
  ExperimentConfig config;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key=value, got '" + line + "'");
    std::string key = Trim(line.substr(0, eq));
    std::string value = Trim(line.substr(eq + 1));
    auto it = KeyTable().find(key);
    if (it == KeyTable().end())
      throw ConfigError("unknown config key: " + key);
    if (!config.seen.insert(key).second)
      throw ConfigError("duplicate config key: " + key);
    it->second(config, key, value);
  }
  return config;
}

ExperimentConfig LoadExperimentConfig(const std::string& path) {
  std::vector<uint8_t> bytes = ReadFileBytes(path);
  return ParseExperimentConfig(std::string(bytes.begin(), bytes.end()));
}

}  // namespace sv
