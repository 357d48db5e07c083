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

#include "sv/train.h"

#include <algorithm>
#include <cmath>

#include "sv/common.h"
#include "sv/eval.h"
#include "sv/scoring.h"

namespace sv {

UtterancePool::UtterancePool(const Dataset& dataset, int capacity)
    : dataset_(dataset), capacity_(capacity) {
  if (capacity < 1) throw ConfigError("UtterancePool: capacity < 1");
  // Initial fill: whole speaker groups, in stream order, up to capacity.
  while (static_cast<int>(order_.size()) < dataset_.NumSpeakers()) {
    const std::string& speaker = dataset_.speakers()[cursor_];
    int group_size =
        static_cast<int>(dataset_.SpeakerUtts(speaker).size());
    if (total_ > 0 && total_ + group_size > capacity_) break;
    Insert(speaker);
    cursor_ = (cursor_ + 1) % dataset_.NumSpeakers();
    if (cursor_ == 0) break;  // every speaker fits at once
  }
  Rebuild();
}

void UtterancePool::Insert(const std::string& speaker) {
  order_.push_back(speaker);
  const std::vector<int>& utts = dataset_.SpeakerUtts(speaker);
  groups_.emplace(speaker, utts);
  total_ += static_cast<int>(utts.size());
}

void UtterancePool::EvictUntilFits() {
  while (total_ > capacity_ && order_.size() > 1) {
    const std::string& victim = order_.front();
    total_ -= static_cast<int>(groups_.at(victim).size());
    groups_.erase(victim);
    order_.pop_front();
  }
}

void UtterancePool::Rebuild() {
  flattened_.clear();
  flattened_.reserve(total_);
  for (const std::string& speaker : order_) {
    const std::vector<int>& utts = groups_.at(speaker);
    flattened_.insert(flattened_.end(), utts.begin(), utts.end());
  }
}

void UtterancePool::Refresh() {
  // Find the next speaker in the stream that is not currently pooled.
  for (int scanned = 0; scanned < dataset_.NumSpeakers(); ++scanned) {
    const std::string& speaker = dataset_.speakers()[cursor_];
    cursor_ = (cursor_ + 1) % dataset_.NumSpeakers();
    if (cursor_ == 0) SV_LOG("UtterancePool: speaker stream wrapped");
    if (groups_.count(speaker) == 0) {
      Insert(speaker);
      EvictUntilFits();
      Rebuild();
      return;
    }
  }
  // Every speaker is already pooled; nothing to rotate.
}

const std::vector<int>* UtterancePool::Group(const std::string& speaker) const {
  auto it = groups_.find(speaker);
  return it == groups_.end() ? nullptr : &it->second;
}

TrainingTrial SampleTrial(const UtterancePool& pool, int n,
                          double target_ratio, Rng& rng) {
  if (n < 1) throw ContractError("SampleTrial: n < 1");
  const std::vector<int>& flat = pool.Flattened();
  if (flat.empty()) throw SamplingError("SampleTrial: empty pool");
  const Dataset& ds = pool.dataset();

  TrainingTrial trial;
  trial.test = flat[rng.UniformInt(static_cast<int>(flat.size()))];
  trial.target = rng.Uniform() < target_ratio;
  const std::string& test_speaker = ds.utt(trial.test).speaker;

  std::vector<int> source;
  if (trial.target) {
    for (int idx : *pool.Group(test_speaker))
      if (idx != trial.test) source.push_back(idx);
    if (source.empty())
      throw SamplingError(
          "SampleTrial: accept trial needs another pooled utterance of " +
          test_speaker);
  } else {
    std::vector<const std::string*> others;
    for (const std::string& speaker : pool.GroupOrder())
      if (speaker != test_speaker) others.push_back(&speaker);
    if (others.empty())
      throw SamplingError(
          "SampleTrial: reject trial needs a second speaker in the pool");
    source = *pool.Group(*others[rng.UniformInt(
        static_cast<int>(others.size()))]);
  }

  int k = std::min<int>(n, static_cast<int>(source.size()));
  for (int pick : rng.SampleWithoutReplacement(
           static_cast<int>(source.size()), k))
    trial.enroll.push_back(source[pick]);
  trial.weights.assign(trial.enroll.size(), 1.0);
  while (static_cast<int>(trial.enroll.size()) < n) {
    trial.enroll.push_back(trial.enroll[0]);
    trial.weights.push_back(0.0);
  }
  return trial;
}

namespace {

struct SgdState {
  std::vector<Matrix> velocity;

  explicit SgdState(const std::vector<Matrix>& params) {
    for (const Matrix& p : params) velocity.emplace_back(p.rows, p.cols);
  }

  void Update(std::vector<Matrix>& params, const Tape& tape,
              const std::vector<VarId>& ids, double lr, double mu) {
    for (size_t i = 0; i < params.size(); ++i) {
      const Matrix& g = tape.Gradient(ids[i]);
      for (size_t j = 0; j < params[i].data.size(); ++j) {
        velocity[i].data[j] = mu * velocity[i].data[j] - lr * g.data[j];
        params[i].data[j] += velocity[i].data[j];
      }
    }
  }
};

std::vector<Matrix> InitialNetParams(const Network& net, Rng& rng,
                                     const std::vector<Matrix>* init) {
  if (init == nullptr) return net.InitParams(rng);
  auto shapes = net.ParamShapes();
  if (init->size() != shapes.size())
    throw ContractError("training: init checkpoint has wrong parameter count");
  for (size_t i = 0; i < shapes.size(); ++i)
    if ((*init)[i].rows != shapes[i].first ||
        (*init)[i].cols != shapes[i].second)
      throw ContractError("training: init checkpoint shape mismatch at index " +
                          std::to_string(i));
  return *init;
}

double FiniteOrThrow(double loss, int step) {
  if (!std::isfinite(loss))
    throw TrainingDivergedError(
        "training diverged: loss is non-finite at step " +
            std::to_string(step),
        step - 1);
  return loss;
}

// The update can blow parameters up even though every logged loss was
// finite; catch that as divergence rather than a leaf contract failure.
void ParamsFiniteOrThrow(const std::vector<Matrix>& params, int step) {
  for (const Matrix& p : params)
    for (double v : p.data)
      if (!std::isfinite(v))
        throw TrainingDivergedError(
            "training diverged: parameters are non-finite at step " +
                std::to_string(step),
            step - 1);
}

int DropoutDim(const Network& net) {
  const NetConfig& c = net.config();
  switch (c.kind) {
    case NetKind::kDnn:
      return c.dnn_hidden.empty() ? net.NumPatches() * c.patch_units
                                  : c.dnn_hidden.back();
    case NetKind::kDvector:
      return net.RepDim();
    case NetKind::kLstm:
      throw ConfigError("dropout is not supported for the LSTM network");
  }
  throw ContractError("DropoutDim: bad enum value");
}

}  // namespace

TrainResult TrainEndToEnd(const NetConfig& net_config,
                          const TrainConfig& config, const Dataset& dataset,
                          const std::vector<Matrix>* init_net_params) {
  if (dataset.NumSpeakers() < 2)
    throw ContractError("TrainEndToEnd: dataset needs at least 2 speakers");
  if (config.batch_size < 1 || config.n_enroll < 1 || config.steps < 0)
    throw ConfigError("TrainEndToEnd: bad batch size, N, or step count");
  Network net(net_config);
  Rng rng(config.seed);
  std::vector<Matrix> params = InitialNetParams(net, rng, init_net_params);
  size_t n_net = params.size();
  params.push_back(Matrix::Scalar(config.e2e_init_w));
  params.push_back(Matrix::Scalar(config.e2e_init_b));

  SgdState sgd(params);
  UtterancePool pool(dataset, config.pool_capacity);
  TrainResult result;
  Tape tape;
  for (int step = 0; step < config.steps; ++step) {
    ParamsFiniteOrThrow(params, step);
    if (step > 0 && config.pool_refresh_period > 0 &&
        step % config.pool_refresh_period == 0)
      pool.Refresh();
    tape.Reset();
    std::vector<VarId> ids;
    ids.reserve(params.size());
    for (const Matrix& p : params) ids.push_back(tape.Leaf(p));
    std::vector<VarId> net_ids(ids.begin(), ids.begin() + n_net);
    VarId w_id = ids[n_net];
    VarId b_id = ids[n_net + 1];

    std::vector<VarId> losses;
    losses.reserve(config.batch_size);
    for (int b = 0; b < config.batch_size; ++b) {
      TrainingTrial trial =
          SampleTrial(pool, config.n_enroll, config.target_ratio, rng);
      VarId test_rep =
          net.BuildRep(tape, net_ids, dataset.utt(trial.test).features);
      std::vector<VarId> enroll_reps;
      for (size_t e = 0; e < trial.enroll.size(); ++e) {
        if (trial.weights[e] == 0.0) {
          enroll_reps.push_back(enroll_reps[0]);  // padded slot, weight 0
        } else {
          enroll_reps.push_back(net.BuildRep(
              tape, net_ids, dataset.utt(trial.enroll[e]).features));
        }
      }
      VarId model = tape.WeightedAverage(enroll_reps, trial.weights);
      VarId score = tape.CosineSimilarity(test_rep, model);
      VarId p_accept =
          tape.Sigmoid(tape.Add(tape.Mul(score, w_id), b_id));
      losses.push_back(tape.NegLogBernoulli(p_accept, trial.target));
    }
    VarId loss = tape.Mean(losses);
    result.log.emplace_back(step,
                            FiniteOrThrow(tape.ScalarValue(loss), step));
    tape.Backward(loss);
    sgd.Update(params, tape, ids, config.learning_rate, config.momentum);
  }
  ParamsFiniteOrThrow(params, config.steps);

  result.checkpoint.net = net_config;
  result.checkpoint.head = HeadKind::kE2e;
  result.checkpoint.params = std::move(params);
  return result;
}

TrainResult TrainSoftmax(const NetConfig& net_config, const TrainConfig& config,
                         const Dataset& dataset,
                         const std::vector<Matrix>* init_net_params) {
  if (config.batch_size < 1 || config.steps < 0)
    throw ConfigError("TrainSoftmax: bad batch size or step count");
  if (config.dropout < 0.0 || config.dropout >= 1.0)
    throw ConfigError("TrainSoftmax: dropout rate must be in [0, 1)");
  Network net(net_config);
  int n_speakers = dataset.NumSpeakers();
  Rng rng(config.seed);
  std::vector<Matrix> params = InitialNetParams(net, rng, init_net_params);
  size_t n_net = params.size();
  {
    Matrix head_w(n_speakers, net.RepDim());
    double s = std::sqrt(6.0 / (n_speakers + net.RepDim()));
    for (double& v : head_w.data) v = rng.Uniform(-s, s);
    params.push_back(std::move(head_w));
    params.emplace_back(n_speakers, 1);
  }
  int mask_dim = config.dropout > 0.0 ? DropoutDim(net) : 0;
  bool sample_candidates =
      config.softmax_candidates > 0 && config.softmax_candidates < n_speakers;

  SgdState sgd(params);
  TrainResult result;
  Tape tape;
  for (int step = 0; step < config.steps; ++step) {
    ParamsFiniteOrThrow(params, step);
    tape.Reset();
    std::vector<VarId> ids;
    ids.reserve(params.size());
    for (const Matrix& p : params) ids.push_back(tape.Leaf(p));
    std::vector<VarId> net_ids(ids.begin(), ids.begin() + n_net);
    VarId head_w = ids[n_net];
    VarId head_b = ids[n_net + 1];

    std::vector<VarId> losses;
    losses.reserve(config.batch_size);
    for (int b = 0; b < config.batch_size; ++b) {
      const Utterance& utt = dataset.utt(rng.UniformInt(dataset.size()));
      int speaker = dataset.SpeakerIndex(utt.speaker);

      Matrix mask;
      if (mask_dim > 0) {
        double keep = 1.0 - config.dropout;
        mask = Matrix(mask_dim, 1);
        for (double& v : mask.data)
          v = rng.Uniform() < keep ? 1.0 / keep : 0.0;
      }
      VarId rep = net.BuildRep(tape, net_ids, utt.features,
                               mask_dim > 0 ? &mask : nullptr);
      if (sample_candidates) {
        std::vector<int> candidates = {speaker};
        for (int pick : rng.SampleWithoutReplacement(
                 n_speakers - 1, config.softmax_candidates - 1))
          candidates.push_back(pick >= speaker ? pick + 1 : pick);
        losses.push_back(tape.SoftmaxCrossEntropySubset(rep, head_w, head_b,
                                                        speaker, candidates));
      } else {
        losses.push_back(
            tape.SoftmaxCrossEntropy(rep, head_w, head_b, speaker));
      }
    }
    VarId loss = tape.Mean(losses);
    result.log.emplace_back(step,
                            FiniteOrThrow(tape.ScalarValue(loss), step));
    tape.Backward(loss);
    sgd.Update(params, tape, ids, config.learning_rate, config.momentum);
  }
  ParamsFiniteOrThrow(params, config.steps);

  result.checkpoint.net = net_config;
  result.checkpoint.head = HeadKind::kSoftmax;
  result.checkpoint.n_speakers = n_speakers;
  result.checkpoint.params = std::move(params);
  return result;
}

double HeldoutEer(const Network& net, const std::vector<Matrix>& net_params,
                  const Dataset& heldout_set, int enroll_count) {
  if (enroll_count < 1) throw ConfigError("HeldoutEer: enroll_count < 1");
  std::map<std::string, SpeakerModel> models;
  std::map<std::string, Matrix> test_features;
  std::vector<std::pair<std::string, std::string>> test_utts;
  for (const std::string& speaker : heldout_set.speakers()) {
    const std::vector<int>& utts = heldout_set.SpeakerUtts(speaker);
    if (static_cast<int>(utts.size()) <= enroll_count)
      throw ContractError("HeldoutEer: speaker " + speaker +
                          " has no test utterances after enrollment");
    std::vector<Matrix> enroll_feats;
    for (int i = 0; i < enroll_count; ++i)
      enroll_feats.push_back(heldout_set.utt(utts[i]).features);
    models.emplace(speaker, Enroll(net, net_params, speaker, enroll_feats,
                                   enroll_count));
    for (size_t i = enroll_count; i < utts.size(); ++i) {
      const Utterance& u = heldout_set.utt(utts[i]);
      test_features.emplace(u.id, u.features);
      test_utts.emplace_back(u.id, u.speaker);
    }
  }
  std::vector<TrialEntry> trials =
      MakeAllPairTrials(test_utts, heldout_set.speakers());
  return Evaluate(net, net_params, models, test_features, trials).eer_raw;
}

std::vector<SweepRow> SweepModelSize(const NetConfig& net_config,
                                     const TrainConfig& config,
                                     const Dataset& train_set,
                                     const Dataset& heldout_set,
                                     const std::vector<int>& sizes,
                                     int enroll_count) {
  if (sizes.empty()) throw ContractError("SweepModelSize: no sizes");
  std::vector<int> sorted = sizes;
  std::sort(sorted.begin(), sorted.end());
  Network net(net_config);
  std::vector<SweepRow> rows;
  for (int size : sorted) {
    TrainConfig cfg = config;
    cfg.n_enroll = size;
    TrainResult trained = TrainEndToEnd(net_config, cfg, train_set);
    rows.push_back({size, HeldoutEer(net, trained.checkpoint.NetParams(),
                                     heldout_set, enroll_count)});
  }
  return rows;
}

}  // namespace sv
