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

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sv/checkpoint.h"
#include "sv/common.h"
#include "sv/config.h"
#include "sv/dataset.h"
#include "sv/eval.h"
#include "sv/features.h"
#include "sv/io.h"
#include "sv/network.h"
#include "sv/scoring.h"
#include "sv/synthetic.h"
#include "sv/train.h"
#include "sv/wav.h"

namespace fs = std::filesystem;

namespace {

sv::ExperimentConfig LoadConfigOrDefault(const std::string& path) {
  if (path.empty()) return sv::ExperimentConfig();
  return sv::LoadExperimentConfig(path);
}

std::string Stem(const fs::path& p) { return p.stem().string(); }

// Speaker id is the file-name prefix before the first '_', or the whole
// stem when there is none.
std::string SpeakerFromStem(const std::string& stem) {
  return stem.substr(0, stem.find('_'));
}

std::vector<fs::path> SortedFiles(const std::string& dir,
                                  const std::string& extension) {
  if (!fs::is_directory(dir))
    throw sv::IoError("not a directory: " + dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == extension)
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  return files;
}

sv::SpeakerModel LoadModelChecked(const std::string& path, int rep_dim) {
  sv::SpeakerModel model = sv::SpeakerModelLoad(path);
  if (model.vec.rows != rep_dim)
    throw sv::ContractError("speaker model " + path + " has dim " +
                            std::to_string(model.vec.rows) +
                            " but the network representation has dim " +
                            std::to_string(rep_dim));
  return model;
}

std::string FormatEer(double eer) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", eer);
  return buf;
}

struct ExtractArgs {
  std::string wav_dir;
  std::string out_dir;
  std::string config_path;
};

int CmdExtract(const ExtractArgs& args) {
  sv::ExperimentConfig config = LoadConfigOrDefault(args.config_path);
  sv::FbankOptions opts = config.fbank;
  // Recorded audio gets the noise-floor subtraction unless the config says
  // otherwise.
  if (!config.Has("feat_subtract_noise_floor")) opts.subtract_noise_floor = true;

  std::vector<fs::path> wavs = SortedFiles(args.wav_dir, ".wav");
  if (wavs.empty()) {
    std::cerr << "error: no input files in " << args.wav_dir << "\n";
    return 1;
  }
  fs::create_directories(args.out_dir);

  std::vector<sv::ManifestEntry> entries;
  std::vector<std::string> failures;
  for (const fs::path& wav : wavs) {
    try {
      sv::WavData audio = sv::WavRead(wav.string());
      sv::Matrix feats =
          sv::ComputeFbank(audio.samples, audio.sample_rate, opts);
      std::string utt = Stem(wav);
      std::string out_path = args.out_dir + "/" + utt + ".fbnk";
      sv::FbnkWrite(out_path, feats);
      entries.push_back({utt, SpeakerFromStem(utt), out_path});
    } catch (const sv::Error& e) {
      failures.push_back(wav.string() + ": " + e.what());
    }
  }
  if (!entries.empty())
    sv::ManifestWrite(args.out_dir + "/manifest.tsv", entries);
  if (!failures.empty()) {
    std::cerr << "error: " << failures.size() << " of " << wavs.size()
              << " files failed:\n";
    for (const std::string& f : failures) std::cerr << "  " << f << "\n";
    return 1;
  }
  std::cout << "wrote " << entries.size() << " feature files to "
            << args.out_dir << "\n";
  return 0;
}

struct SynthArgs {
  std::string config_path;
  std::string out_dir;
};

int CmdSynth(const SynthArgs& args, const sv::ExperimentConfig& config) {
  sv::SyntheticCorpus corpus = sv::GenerateCorpus(config.synth);
  sv::WriteCorpus(corpus, args.out_dir, config.eval_enroll_count);
  std::cout << "wrote synthetic corpus: " << config.synth.speakers_train
            << " train + " << config.synth.speakers_heldout
            << " held-out speakers, "
            << (corpus.train.size() + corpus.heldout.size())
            << " utterances in " << args.out_dir << "\n";
  return 0;
}

struct TrainArgs {
  std::string manifest;
  std::string out_dir;
  std::string init_path;
};

int CmdTrain(const TrainArgs& args, const sv::ExperimentConfig& config) {
  sv::Dataset dataset = sv::Dataset::FromManifest(args.manifest);
  if (dataset.utt(0).features.cols != config.net.feat_dim)
    throw sv::ConfigError(
        "net_feat_dim " + std::to_string(config.net.feat_dim) +
        " does not match feature dim " +
        std::to_string(dataset.utt(0).features.cols) + " in " + args.manifest);

  std::vector<sv::Matrix> init_params;
  const std::vector<sv::Matrix>* init = nullptr;
  if (!args.init_path.empty()) {
    sv::Checkpoint ckpt = sv::CheckpointLoad(args.init_path);
    init_params = ckpt.NetParams();
    init = &init_params;
  }

  sv::TrainResult result;
  try {
    if (config.train.loss == "e2e")
      result = sv::TrainEndToEnd(config.net, config.train, dataset, init);
    else
      result = sv::TrainSoftmax(config.net, config.train, dataset, init);
  } catch (const sv::TrainingDivergedError& e) {
    std::cerr << "error: " << e.what() << " (last good step "
              << e.last_good_step() << ")\n";
    return 1;
  }

  fs::create_directories(args.out_dir);
  sv::CheckpointSave(args.out_dir + "/model.ckpt", result.checkpoint);
  sv::TrainLogWrite(args.out_dir + "/train_log.tsv", result.log);
  std::cout << "trained " << result.log.size() << " steps, final loss "
            << sv::FormatScore(result.log.empty() ? 0.0
                                                  : result.log.back().second)
            << ", wrote " << args.out_dir << "/model.ckpt\n";
  return 0;
}

struct EnrollArgs {
  std::string ckpt_path;
  std::string manifest;
  std::string out_dir;
  std::string config_path;
};

int CmdEnroll(const EnrollArgs& args) {
  sv::ExperimentConfig config = LoadConfigOrDefault(args.config_path);
  sv::Checkpoint ckpt = sv::CheckpointLoad(args.ckpt_path);
  sv::Network net(ckpt.net);
  std::vector<sv::Matrix> params = ckpt.NetParams();

  std::map<std::string, std::vector<sv::Matrix>> by_speaker;
  for (const sv::ManifestEntry& e : sv::ManifestRead(args.manifest))
    by_speaker[e.speaker].push_back(sv::FbnkRead(e.path));

  fs::create_directories(args.out_dir);
  for (const auto& [speaker, feats] : by_speaker) {
    sv::SpeakerModel model =
        sv::Enroll(net, params, speaker, feats, config.eval_enroll_max);
    sv::SpeakerModelSave(args.out_dir + "/" + speaker + ".svspk", model);
  }
  std::cout << "enrolled " << by_speaker.size() << " speakers in "
            << args.out_dir << "\n";
  return 0;
}

struct EvalArgs {
  std::string ckpt_path;
  std::string models_dir;
  std::string manifest;
  std::string trials_path;
  std::string out_dir;
  std::string det_out;
  std::string cohort_dir;
  bool tnorm = false;
};

int CmdEval(const EvalArgs& args) {
  sv::Checkpoint ckpt = sv::CheckpointLoad(args.ckpt_path);
  sv::Network net(ckpt.net);
  std::vector<sv::Matrix> params = ckpt.NetParams();

  std::vector<sv::TrialEntry> trials = sv::TrialsRead(args.trials_path);
  std::set<std::string> claimed;
  for (const sv::TrialEntry& t : trials) claimed.insert(t.claimed_speaker);

  std::vector<std::string> missing;
  std::map<std::string, sv::SpeakerModel> models;
  for (const std::string& speaker : claimed) {
    std::string path = args.models_dir + "/" + speaker + ".svspk";
    if (!fs::is_regular_file(path)) {
      missing.push_back(speaker);
      continue;
    }
    models.emplace(speaker, LoadModelChecked(path, net.RepDim()));
  }
  if (!missing.empty()) {
    for (const std::string& speaker : missing)
      std::cerr << "error: missing speaker model for " << speaker << " ("
                << args.models_dir << "/" << speaker << ".svspk)\n";
    return 1;
  }

  std::map<std::string, sv::Matrix> test_features;
  for (const sv::ManifestEntry& e : sv::ManifestRead(args.manifest))
    test_features.emplace(e.utt_id, sv::FbnkRead(e.path));

  std::vector<sv::SpeakerModel> cohort;
  if (args.tnorm) {
    if (args.cohort_dir.empty())
      throw sv::ConfigError("--tnorm requires --cohort DIR of speaker models");
    for (const fs::path& p : SortedFiles(args.cohort_dir, ".svspk"))
      cohort.push_back(LoadModelChecked(p.string(), net.RepDim()));
    if (cohort.size() < 2)
      throw sv::ContractError("t-norm cohort needs at least 2 models, found " +
                              std::to_string(cohort.size()) + " in " +
                              args.cohort_dir);
  }

  sv::EvalReport report = sv::Evaluate(net, params, models, test_features,
                                       trials, args.tnorm ? &cohort : nullptr);
  fs::create_directories(args.out_dir);
  sv::ScoresWrite(args.out_dir + "/scores.tsv", report.records);
  std::string summary = sv::FormatSummary(report);
  sv::WriteFileBytes(args.out_dir + "/summary.txt", summary);
  if (!args.det_out.empty()) sv::DetWrite(args.det_out, report);
  std::cout << summary;
  return 0;
}

struct SweepArgs {
  std::string manifest;
  std::string heldout_manifest;
  std::string out_dir;
  std::vector<int> sizes;
};

int CmdSweep(const SweepArgs& args, const sv::ExperimentConfig& config) {
  sv::Dataset train_set = sv::Dataset::FromManifest(args.manifest);
  sv::Dataset heldout_set = sv::Dataset::FromManifest(args.heldout_manifest);
  std::vector<sv::SweepRow> rows =
      sv::SweepModelSize(config.net, config.train, train_set, heldout_set,
                         args.sizes, config.eval_enroll_count);
  std::string table = "size\teer_raw\n";
  for (const sv::SweepRow& row : rows)
    table += std::to_string(row.size) + "\t" + FormatEer(row.eer_raw) + "\n";
  fs::create_directories(args.out_dir);
  sv::WriteFileBytes(args.out_dir + "/sweep.tsv", table);
  std::cout << table;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"svkit: end-to-end text-dependent speaker verification"};
  app.require_subcommand(1);

  ExtractArgs extract_args;
  CLI::App* extract =
      app.add_subcommand("extract", "Compute log-filterbank features for WAVs");
  extract->add_option("wav_dir", extract_args.wav_dir, "Directory of WAV files")
      ->required();
  extract->add_option("--out", extract_args.out_dir, "Output directory")
      ->required();
  extract->add_option("--config", extract_args.config_path, "Config file");

  SynthArgs synth_args;
  CLI::App* synth =
      app.add_subcommand("synth", "Generate the synthetic benchmark corpus");
  synth->add_option("--out", synth_args.out_dir, "Output directory")
      ->required();
  synth->add_option("--config", synth_args.config_path, "Config file");

  TrainArgs train_args;
  std::string train_config_path;
  CLI::App* train = app.add_subcommand("train", "Train a verification model");
  train->add_option("manifest", train_args.manifest, "Training manifest TSV")
      ->required();
  train->add_option("--out", train_args.out_dir, "Output directory")
      ->required();
  train->add_option("--config", train_config_path, "Config file");
  train->add_option("--init", train_args.init_path,
                    "Checkpoint whose network parameters initialize training");

  EnrollArgs enroll_args;
  CLI::App* enroll =
      app.add_subcommand("enroll", "Build speaker models from a manifest");
  enroll->add_option("checkpoint", enroll_args.ckpt_path, "Model checkpoint")
      ->required();
  enroll->add_option("manifest", enroll_args.manifest, "Enrollment manifest")
      ->required();
  enroll->add_option("--out", enroll_args.out_dir, "Output directory")
      ->required();
  enroll->add_option("--config", enroll_args.config_path, "Config file");

  EvalArgs eval_args;
  CLI::App* eval =
      app.add_subcommand("eval", "Score a trial list and report EER");
  eval->add_option("checkpoint", eval_args.ckpt_path, "Model checkpoint")
      ->required();
  eval->add_option("models", eval_args.models_dir, "Speaker model directory")
      ->required();
  eval->add_option("manifest", eval_args.manifest, "Test utterance manifest")
      ->required();
  eval->add_option("trials", eval_args.trials_path, "Trial list TSV")
      ->required();
  eval->add_option("--out", eval_args.out_dir, "Output directory")->required();
  eval->add_flag("--tnorm", eval_args.tnorm, "Also report t-norm EER");
  eval->add_option("--cohort", eval_args.cohort_dir,
                   "Directory of cohort speaker models for t-norm");
  eval->add_option("--det-out", eval_args.det_out, "Write DET points TSV");

  SweepArgs sweep_args;
  std::string sweep_config_path;
  CLI::App* sweep =
      app.add_subcommand("sweep", "Sweep speaker model size vs. EER");
  sweep->add_option("manifest", sweep_args.manifest, "Training manifest TSV")
      ->required();
  sweep
      ->add_option("heldout", sweep_args.heldout_manifest,
                   "Held-out manifest TSV for evaluation")
      ->required();
  sweep->add_option("--out", sweep_args.out_dir, "Output directory")
      ->required();
  sweep->add_option("--config", sweep_config_path, "Config file");
  sweep
      ->add_option("--sizes", sweep_args.sizes,
                   "Comma-separated speaker model sizes")
      ->required()
      ->delimiter(',');

  uint64_t seed = 0;
  CLI::Option* seed_opt =
      app.add_option("--seed", seed, "Override the config seed");
  // Let "svkit <cmd> --seed N" reach the global option above.
  for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*extract) return CmdExtract(extract_args);
    if (*synth) {
      sv::ExperimentConfig config = LoadConfigOrDefault(synth_args.config_path);
      if (*seed_opt) config.SetSeed(seed);
      return CmdSynth(synth_args, config);
    }
    if (*train) {
      sv::ExperimentConfig config = LoadConfigOrDefault(train_config_path);
      if (*seed_opt) config.SetSeed(seed);
      return CmdTrain(train_args, config);
    }
    if (*enroll) return CmdEnroll(enroll_args);
    if (*eval) return CmdEval(eval_args);
    if (*sweep) {
      sv::ExperimentConfig config = LoadConfigOrDefault(sweep_config_path);
      if (*seed_opt) config.SetSeed(seed);
      return CmdSweep(sweep_args, config);
    }
  } catch (const sv::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
