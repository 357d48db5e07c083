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

#include "sv/synthetic.h"

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "sv/common.h"
#include "sv/eval.h"
#include "sv/rng.h"

namespace sv {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

uint64_t DeriveSeed(uint64_t seed, uint64_t stream, uint64_t index) {
  return SplitMix64(SplitMix64(seed ^ (stream * 0x9e3779b97f4a7c15ULL)) ^
                    index);
}

Matrix UnitSphere(Rng& rng, int dim) {
  Matrix v(dim, 1);
  double norm = 0.0;
  while (norm < 1e-8) {
    for (double& x : v.data) x = rng.Gaussian();
    norm = Norm(v);
  }
  for (double& x : v.data) x /= norm;
  return v;
}

// Random orthonormal basis of R^d via Gram-Schmidt on Gaussian draws,
// returned column-major (basis[i] is the i-th column).
std::vector<Matrix> OrthonormalBasis(Rng& rng, int d) {
  std::vector<Matrix> basis;
  basis.reserve(d);
  while (static_cast<int>(basis.size()) < d) {
    Matrix v(d, 1);
    for (double& x : v.data) x = rng.Gaussian();
    for (const Matrix& q : basis) {
      double proj = Dot(q, v);
      for (int i = 0; i < d; ++i) v.data[i] -= proj * q.data[i];
    }
    double norm = Norm(v);
    if (norm < 1e-8) continue;  // essentially parallel draw, try again
    for (double& x : v.data) x /= norm;
    basis.push_back(std::move(v));
  }
  return basis;
}

void CheckConfig(const SynthConfig& c) {
  if (c.speakers_train < 1 || c.speakers_heldout < 1 ||
      c.utts_per_speaker < 1 || c.frames < 1 || c.feat_dim < 1 ||
      c.latent_dim < 1)
    throw ConfigError("SynthConfig: all counts must be >= 1");
  if (c.latent_dim > c.feat_dim)
    throw ConfigError("SynthConfig: latent_dim exceeds feat_dim");
  if (c.noise < 0.0) throw ConfigError("SynthConfig: negative noise");
  if (c.nuisance_scale < 0.0)
    throw ConfigError("SynthConfig: negative nuisance_scale");
}

std::string SpeakerName(int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "spk%03d", index);
  return buf;
}

}  // namespace

SyntheticCorpus GenerateCorpus(const SynthConfig& config) {
  CheckConfig(config);
  SyntheticCorpus corpus;
  corpus.config = config;

  int d = config.feat_dim;
  int l = config.latent_dim;
  int nuisance_dim = d - l;

  Rng global(DeriveSeed(config.seed, 1, 0));
  std::vector<Matrix> basis = OrthonormalBasis(global, d);

  // Smooth shared temporal envelope in [0.5, 1.5].
  int cycles = 1 + global.UniformInt(3);
  double phase = global.Uniform(0.0, kTwoPi);
  std::vector<double> envelope(config.frames);
  for (int t = 0; t < config.frames; ++t)
    envelope[t] =
        1.0 + 0.5 * std::sin(kTwoPi * cycles * t / config.frames + phase);

  int total_speakers = config.speakers_train + config.speakers_heldout;
  for (int s = 0; s < total_speakers; ++s) {
    bool heldout = s >= config.speakers_train;
    std::string name = SpeakerName(s);
    (heldout ? corpus.heldout_speakers : corpus.train_speakers).push_back(name);

    Rng spk_rng(DeriveSeed(config.seed, 2, static_cast<uint64_t>(s)));
    Matrix v = UnitSphere(spk_rng, l);
    corpus.speaker_latents.emplace(name, v);

    // Identity direction in feature space: A v.
    Matrix signal(d, 1);
    for (int i = 0; i < l; ++i)
      for (int r = 0; r < d; ++r) signal.data[r] += basis[i].data[r] * v.data[i];

    for (int u = 0; u < config.utts_per_speaker; ++u) {
      Rng utt_rng(DeriveSeed(config.seed, 3,
                             static_cast<uint64_t>(s) * 100003ULL + u));
      Matrix direction = signal;
      if (nuisance_dim > 0 && config.nuisance_scale > 0.0) {
        Matrix g = UnitSphere(utt_rng, nuisance_dim);
        double scale = config.nuisance_scale * config.noise;
        for (int i = 0; i < nuisance_dim; ++i)
          for (int r = 0; r < d; ++r)
            direction.data[r] += scale * basis[l + i].data[r] * g.data[i];
      }
      SyntheticUtterance utt;
      char buf[16];
      std::snprintf(buf, sizeof(buf), "_u%02d", u);
      utt.utt_id = name + buf;
      utt.speaker = name;
      utt.features = Matrix(config.frames, d);
      for (int t = 0; t < config.frames; ++t)
        for (int r = 0; r < d; ++r)
          utt.features(t, r) = envelope[t] * direction.data[r] +
                               config.noise * utt_rng.Gaussian();
      (heldout ? corpus.heldout : corpus.train).push_back(std::move(utt));
    }
  }
  return corpus;
}

double OracleEer(const SyntheticCorpus& corpus,
                 const std::vector<TrialEntry>& trials) {
  std::map<std::string, std::string> utt_speaker;
  for (const SyntheticUtterance& u : corpus.train)
    utt_speaker.emplace(u.utt_id, u.speaker);
  for (const SyntheticUtterance& u : corpus.heldout)
    utt_speaker.emplace(u.utt_id, u.speaker);

  std::vector<double> targets, nontargets;
  for (const TrialEntry& t : trials) {
    auto spk_it = utt_speaker.find(t.test_utt);
    auto claim_it = corpus.speaker_latents.find(t.claimed_speaker);
    if (spk_it == utt_speaker.end() || claim_it == corpus.speaker_latents.end())
      throw ContractError("OracleEer: unknown id in trial " + t.trial_id);
    const Matrix& v_true = corpus.speaker_latents.at(spk_it->second);
    double score = Dot(v_true, claim_it->second);  // unit vectors
    (t.target ? targets : nontargets).push_back(score);
  }
  return ComputeEer(targets, nontargets).eer;
}

CorpusFiles WriteCorpus(const SyntheticCorpus& corpus,
                        const std::string& out_dir, int enroll_count) {
  if (enroll_count < 1 ||
      enroll_count >= corpus.config.utts_per_speaker)
    throw ConfigError(
        "WriteCorpus: enroll_count must leave at least one test utterance");
  std::filesystem::create_directories(out_dir);

  auto feature_path = [&](const std::string& utt_id) {
    return out_dir + "/" + utt_id + ".fbnk";
  };
  std::vector<ManifestEntry> train_entries;
  for (const SyntheticUtterance& u : corpus.train) {
    FbnkWrite(feature_path(u.utt_id), u.features);
    train_entries.push_back({u.utt_id, u.speaker, feature_path(u.utt_id)});
  }
  std::vector<ManifestEntry> enroll_entries, test_entries;
  std::map<std::string, int> seen;
  for (const SyntheticUtterance& u : corpus.heldout) {
    FbnkWrite(feature_path(u.utt_id), u.features);
    ManifestEntry e{u.utt_id, u.speaker, feature_path(u.utt_id)};
    if (seen[u.speaker]++ < enroll_count)
      enroll_entries.push_back(std::move(e));
    else
      test_entries.push_back(std::move(e));
  }
  std::vector<std::pair<std::string, std::string>> test_utts;
  for (const ManifestEntry& e : test_entries)
    test_utts.emplace_back(e.utt_id, e.speaker);

  CorpusFiles files;
  files.train_manifest = out_dir + "/train.tsv";
  files.enroll_manifest = out_dir + "/heldout_enroll.tsv";
  files.test_manifest = out_dir + "/heldout_test.tsv";
  files.trials = out_dir + "/trials.tsv";
  ManifestWrite(files.train_manifest, train_entries);
  ManifestWrite(files.enroll_manifest, enroll_entries);
  ManifestWrite(files.test_manifest, test_entries);
  TrialsWrite(files.trials,
              MakeAllPairTrials(test_utts, corpus.heldout_speakers));
  return files;
}

}  // namespace sv
