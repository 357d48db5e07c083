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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "sv/common.h"
#include "sv/dataset.h"
#include "sv/network.h"
#include "sv/rng.h"
#include "sv/scoring.h"
#include "sv/synthetic.h"
#include "sv/tape.h"
#include "sv/train.h"

namespace {

using sv::Dataset;
using sv::Matrix;
using sv::NetConfig;
using sv::NetKind;
using sv::Network;
using sv::Tape;
using sv::TrainConfig;
using sv::TrainingTrial;
using sv::Utterance;
using sv::UtterancePool;
using sv::VarId;

// Random-feature dataset with ragged speaker groups for pool and sampling
// tests. Speaker names sort in construction order.
Dataset MakeDataset(const std::vector<int>& group_sizes, int frames = 4,
                    int dim = 3, uint64_t seed = 5) {
  sv::Rng rng(seed);
  std::vector<Utterance> utts;
  for (size_t s = 0; s < group_sizes.size(); ++s) {
    char spk[8];
    std::snprintf(spk, sizeof(spk), "s%02zu", s);
    for (int u = 0; u < group_sizes[s]; ++u) {
      Utterance utt;
      utt.speaker = spk;
      utt.id = std::string(spk) + "_u" + std::to_string(u);
      utt.features = Matrix(frames, dim);
      for (double& v : utt.features.data) v = rng.Uniform(-1.0, 1.0);
      utts.push_back(std::move(utt));
    }
  }
  return Dataset(std::move(utts));
}

Dataset ToDataset(const std::vector<sv::SyntheticUtterance>& utts) {
  std::vector<Utterance> out;
  for (const auto& u : utts) out.push_back({u.utt_id, u.speaker, u.features});
  return Dataset(std::move(out));
}

NetConfig TinyDvector(int feat_dim = 3) {
  NetConfig cfg;
  cfg.kind = NetKind::kDvector;
  cfg.feat_dim = feat_dim;
  cfg.context = 1;
  cfg.dvector_hidden = {4, 5};
  return cfg;
}

sv::SynthConfig TrainableConfig() {
  sv::SynthConfig cfg;
  cfg.speakers_train = 6;
  cfg.speakers_heldout = 4;
  cfg.utts_per_speaker = 8;
  cfg.frames = 10;
  cfg.feat_dim = 3;
  cfg.latent_dim = 2;
  cfg.noise = 0.3;
  cfg.nuisance_scale = 4.0;
  cfg.seed = 11;
  return cfg;
}

TrainConfig QuickTrain() {
  TrainConfig cfg;
  cfg.steps = 30;
  cfg.batch_size = 4;
  cfg.n_enroll = 2;
  cfg.learning_rate = 0.05;
  cfg.pool_capacity = 1000;
  cfg.pool_refresh_period = 8;
  cfg.seed = 3;
  return cfg;
}

}  // namespace

TEST_CASE("pool fills whole groups in stream order and evicts FIFO") {
  Dataset ds = MakeDataset({10, 10, 10, 10, 10});
  UtterancePool pool(ds, 30);
  CHECK(pool.size() == 30);
  REQUIRE(pool.GroupOrder().size() == 3);
  CHECK(pool.GroupOrder()[0] == "s00");
  CHECK(pool.GroupOrder()[1] == "s01");
  CHECK(pool.GroupOrder()[2] == "s02");
  CHECK(pool.Group("s00") != nullptr);
  CHECK(pool.Group("s03") == nullptr);

  // Flattened order is the concatenation of the pooled groups.
  std::vector<int> want;
  for (const std::string& spk : {"s00", "s01", "s02"})
    for (int idx : ds.SpeakerUtts(spk)) want.push_back(idx);
  CHECK(pool.Flattened() == want);

  // Refreshing admits the next speaker and evicts the oldest group.
  pool.Refresh();
  CHECK(pool.size() == 30);
  REQUIRE(pool.GroupOrder().size() == 3);
  CHECK(pool.GroupOrder()[0] == "s01");
  CHECK(pool.GroupOrder()[2] == "s03");
  CHECK(pool.Group("s00") == nullptr);

  pool.Refresh();
  CHECK(pool.GroupOrder()[2] == "s04");
  // The stream wraps back to the first speaker.
  pool.Refresh();
  REQUIRE(pool.GroupOrder().size() == 3);
  CHECK(pool.GroupOrder()[0] == "s03");
  CHECK(pool.GroupOrder()[2] == "s00");
  CHECK(pool.size() == 30);
}

TEST_CASE("pool keeps every group when capacity allows") {
  Dataset ds = MakeDataset({10, 10, 10, 10, 10, 10, 10, 10, 10, 10});
  UtterancePool pool(ds, 100);
  CHECK(pool.size() == 100);
  CHECK(pool.GroupOrder().size() == 10);
  // Nothing to rotate: refresh leaves the fully pooled stream unchanged.
  pool.Refresh();
  CHECK(pool.size() == 100);
  CHECK(pool.GroupOrder().size() == 10);
  CHECK(pool.GroupOrder()[0] == "s00");
}

TEST_CASE("pool admits an oversized group and keeps at least one") {
  Dataset ds = MakeDataset({12, 3});
  UtterancePool pool(ds, 5);
  CHECK(pool.size() == 12);  // first group always enters
  CHECK(pool.GroupOrder().size() == 1);
  pool.Refresh();  // inserts s01 (15 > 5), evicts s00, keeps s01
  CHECK(pool.GroupOrder().size() == 1);
  CHECK(pool.GroupOrder()[0] == "s01");
  CHECK(pool.size() == 3);
  CHECK_THROWS_AS(UtterancePool(ds, 0), sv::ConfigError);
}

TEST_CASE("ragged groups evict until the new group fits") {
  Dataset ds = MakeDataset({4, 4, 4, 12});
  UtterancePool pool(ds, 12);  // holds s00..s02
  CHECK(pool.size() == 12);
  CHECK(pool.GroupOrder().size() == 3);
  pool.Refresh();  // s03 has 12 utterances; all three old groups must go
  REQUIRE(pool.GroupOrder().size() == 1);
  CHECK(pool.GroupOrder()[0] == "s03");
  CHECK(pool.size() == 12);
}

TEST_CASE("trial sampling draws valid 1+N trials") {
  Dataset ds = MakeDataset({6, 6, 6});
  UtterancePool pool(ds, 1000);
  sv::Rng rng(17);
  int n_target = 0;
  const int kDraws = 2000;
  for (int it = 0; it < kDraws; ++it) {
    TrainingTrial trial = SampleTrial(pool, 3, 0.5, rng);
    CHECK(trial.test >= 0);
    CHECK(trial.test < ds.size());
    REQUIRE(trial.enroll.size() == 3);
    REQUIRE(trial.weights.size() == 3);
    const std::string& test_spk = ds.utt(trial.test).speaker;
    std::set<int> seen;
    for (size_t e = 0; e < trial.enroll.size(); ++e) {
      CHECK(trial.weights[e] == 1.0);  // groups of 6 never pad at N=3
      CHECK(seen.insert(trial.enroll[e]).second);
      const std::string& spk = ds.utt(trial.enroll[e]).speaker;
      if (trial.target) {
        CHECK(spk == test_spk);
        CHECK(trial.enroll[e] != trial.test);
      } else {
        CHECK(spk != test_spk);
        CHECK(spk == ds.utt(trial.enroll[0]).speaker);  // one impostor
      }
    }
    n_target += trial.target;
  }
  double ratio = static_cast<double>(n_target) / kDraws;
  CHECK(ratio > 0.45);
  CHECK(ratio < 0.55);

  CHECK(SampleTrial(pool, 2, 1.0, rng).target);
  CHECK_FALSE(SampleTrial(pool, 2, 0.0, rng).target);
  CHECK_THROWS_AS(SampleTrial(pool, 0, 0.5, rng), sv::ContractError);
}

TEST_CASE("shortfall pads with the first index at weight zero") {
  Dataset ds = MakeDataset({4, 4});
  UtterancePool pool(ds, 1000);
  sv::Rng rng(19);
  for (int it = 0; it < 50; ++it) {
    TrainingTrial t = SampleTrial(pool, 5, 1.0, rng);
    REQUIRE(t.enroll.size() == 5);
    // Accept trials can use only the 3 remaining same-speaker utterances.
    CHECK(t.weights == std::vector<double>{1, 1, 1, 0, 0});
    CHECK(t.enroll[3] == t.enroll[0]);
    CHECK(t.enroll[4] == t.enroll[0]);
  }
  for (int it = 0; it < 50; ++it) {
    TrainingTrial t = SampleTrial(pool, 5, 0.0, rng);
    CHECK(t.weights == std::vector<double>{1, 1, 1, 1, 0});
    CHECK(t.enroll[4] == t.enroll[0]);
  }
}

TEST_CASE("sampling errors when the pool cannot supply a trial") {
  Dataset one_speaker = MakeDataset({3});
  UtterancePool pool(one_speaker, 100);
  sv::Rng rng(23);
  CHECK_THROWS_AS(SampleTrial(pool, 2, 0.0, rng), sv::SamplingError);

  Dataset singletons = MakeDataset({1, 1});
  UtterancePool pool2(singletons, 100);
  CHECK_THROWS_AS(SampleTrial(pool2, 2, 1.0, rng), sv::SamplingError);
}

TEST_CASE("weight-zero padding is an exact no-op in the loss graph") {
  Network net(TinyDvector());
  sv::Rng rng(29);
  std::vector<Matrix> params = net.InitParams(rng);
  Matrix test_feat(4, 3), e1_feat(5, 3), e2_feat(3, 3);
  for (Matrix* m : {&test_feat, &e1_feat, &e2_feat})
    for (double& v : m->data) v = rng.Uniform(-1.0, 1.0);
  Matrix w = Matrix::Scalar(7.0);
  Matrix b = Matrix::Scalar(-3.0);

  auto run = [&](bool padded) {
    Tape tape;
    std::vector<VarId> ids;
    for (const Matrix& p : params) ids.push_back(tape.Leaf(p));
    VarId w_id = tape.Leaf(w);
    VarId b_id = tape.Leaf(b);
    VarId test_rep = net.BuildRep(tape, ids, test_feat);
    std::vector<VarId> enroll = {net.BuildRep(tape, ids, e1_feat),
                                 net.BuildRep(tape, ids, e2_feat)};
    std::vector<double> weights = {1.0, 1.0};
    if (padded) {
      enroll.push_back(enroll[0]);
      enroll.push_back(enroll[0]);
      weights.push_back(0.0);
      weights.push_back(0.0);
    }
    VarId model = tape.WeightedAverage(enroll, weights);
    VarId score = tape.CosineSimilarity(test_rep, model);
    VarId p = tape.Sigmoid(tape.Add(tape.Mul(score, w_id), b_id));
    VarId loss = tape.NegLogBernoulli(p, true);
    double value = tape.ScalarValue(loss);
    tape.Backward(loss);
    std::vector<std::vector<double>> grads;
    for (VarId id : ids) grads.push_back(tape.Gradient(id).data);
    grads.push_back(tape.Gradient(w_id).data);
    grads.push_back(tape.Gradient(b_id).data);
    return std::pair<double, std::vector<std::vector<double>>>(value, grads);
  };

  auto [loss_plain, grads_plain] = run(false);
  auto [loss_padded, grads_padded] = run(true);
  CHECK(loss_plain == loss_padded);
  REQUIRE(grads_plain.size() == grads_padded.size());
  for (size_t i = 0; i < grads_plain.size(); ++i)
    CHECK(grads_plain[i] == grads_padded[i]);
}

TEST_CASE("end-to-end training is deterministic") {
  Dataset train = ToDataset(sv::GenerateCorpus(TrainableConfig()).train);
  TrainConfig cfg = QuickTrain();
  sv::TrainResult a = sv::TrainEndToEnd(TinyDvector(), cfg, train);
  sv::TrainResult b = sv::TrainEndToEnd(TinyDvector(), cfg, train);
  REQUIRE(a.log.size() == 30);
  CHECK(a.log == b.log);
  CHECK(a.log[0].first == 0);
  CHECK(a.log[29].first == 29);
  REQUIRE(a.checkpoint.params.size() == b.checkpoint.params.size());
  for (size_t i = 0; i < a.checkpoint.params.size(); ++i)
    CHECK(a.checkpoint.params[i].data == b.checkpoint.params[i].data);
  CHECK(a.checkpoint.head == sv::HeadKind::kE2e);

  // A different seed moves the parameters.
  cfg.seed += 1;
  sv::TrainResult c = sv::TrainEndToEnd(TinyDvector(), cfg, train);
  CHECK(c.checkpoint.params[0].data != a.checkpoint.params[0].data);
}

TEST_CASE("logged batch loss is the mean of independent trial losses") {
  Dataset train = ToDataset(sv::GenerateCorpus(TrainableConfig()).train);
  TrainConfig cfg = QuickTrain();
  cfg.steps = 1;
  cfg.batch_size = 6;
  sv::TrainResult result = sv::TrainEndToEnd(TinyDvector(), cfg, train);
  REQUIRE(result.log.size() == 1);

  // Replay the first step's draws: params, then pool, then trials.
  Network net(TinyDvector());
  sv::Rng rng(cfg.seed);
  std::vector<Matrix> params = net.InitParams(rng);
  UtterancePool pool(train, cfg.pool_capacity);
  double total = 0.0;
  for (int t = 0; t < cfg.batch_size; ++t) {
    TrainingTrial trial =
        SampleTrial(pool, cfg.n_enroll, cfg.target_ratio, rng);
    Matrix test_rep = sv::NetworkRep(net, params, train.utt(trial.test).features);
    Matrix model(net.RepDim(), 1);
    int used = 0;
    for (size_t e = 0; e < trial.enroll.size(); ++e) {
      if (trial.weights[e] == 0.0) continue;
      Matrix rep =
          sv::NetworkRep(net, params, train.utt(trial.enroll[e]).features);
      for (int i = 0; i < model.Size(); ++i) model.data[i] += rep.data[i];
      ++used;
    }
    for (double& v : model.data) v /= used;
    double score = sv::CosineScore(test_rep, model);
    double p = 1.0 / (1.0 + std::exp(-(cfg.e2e_init_w * score +
                                       cfg.e2e_init_b)));
    double q = trial.target ? p : 1.0 - p;
    total += -std::log(std::max(q, 1e-12));
  }
  CHECK(result.log[0].second ==
        doctest::Approx(total / cfg.batch_size).epsilon(1e-10));
}

TEST_CASE("end-to-end training reduces the loss and the held-out EER") {
  sv::SynthConfig synth = TrainableConfig();
  sv::SyntheticCorpus corpus = sv::GenerateCorpus(synth);
  Dataset train = ToDataset(corpus.train);
  Dataset heldout = ToDataset(corpus.heldout);

  TrainConfig cfg = QuickTrain();
  cfg.steps = 200;
  cfg.batch_size = 8;
  sv::TrainResult result = sv::TrainEndToEnd(TinyDvector(), cfg, train);

  double first = 0.0, last = 0.0;
  for (int i = 0; i < 10; ++i) {
    first += result.log[i].second / 10.0;
    last += result.log[cfg.steps - 10 + i].second / 10.0;
  }
  CHECK(last < 0.6 * first);

  Network net(TinyDvector());
  sv::Rng init_rng(cfg.seed);
  double untrained = HeldoutEer(net, net.InitParams(init_rng), heldout, 3);
  double trained =
      HeldoutEer(net, result.checkpoint.NetParams(), heldout, 3);
  CHECK(trained < untrained);
}

TEST_CASE("softmax training is deterministic and trains the classifier") {
  sv::SynthConfig synth = TrainableConfig();
  synth.noise = 0.1;
  synth.nuisance_scale = 2.0;
  Dataset train = ToDataset(sv::GenerateCorpus(synth).train);
  TrainConfig cfg = QuickTrain();
  cfg.loss = "softmax";
  cfg.steps = 80;
  cfg.batch_size = 8;
  cfg.learning_rate = 0.1;
  sv::TrainResult a = sv::TrainSoftmax(TinyDvector(), cfg, train);
  sv::TrainResult b = sv::TrainSoftmax(TinyDvector(), cfg, train);
  CHECK(a.log == b.log);
  CHECK(a.checkpoint.head == sv::HeadKind::kSoftmax);
  CHECK(a.checkpoint.n_speakers == 6);
  // Head: one row and one bias per training speaker.
  Network net(TinyDvector());
  REQUIRE(a.checkpoint.params.size() == net.ParamShapes().size() + 2);
  CHECK(a.checkpoint.params[net.ParamShapes().size()].rows == 6);

  double first = 0.0, last = 0.0;
  for (int i = 0; i < 10; ++i) {
    first += a.log[i].second / 10.0;
    last += a.log[cfg.steps - 10 + i].second / 10.0;
  }
  CHECK(last < 0.75 * first);
}

TEST_CASE("candidate sampling changes the loss but large K disables it") {
  Dataset train = ToDataset(sv::GenerateCorpus(TrainableConfig()).train);
  TrainConfig cfg = QuickTrain();
  cfg.loss = "softmax";
  cfg.steps = 10;
  sv::TrainResult full = sv::TrainSoftmax(TinyDvector(), cfg, train);
  cfg.softmax_candidates = 3;  // of 6 speakers
  sv::TrainResult sampled = sv::TrainSoftmax(TinyDvector(), cfg, train);
  CHECK(sampled.log != full.log);
  cfg.softmax_candidates = 6;  // K >= num speakers falls back to the full loss
  sv::TrainResult disabled = sv::TrainSoftmax(TinyDvector(), cfg, train);
  CHECK(disabled.log == full.log);
  for (size_t i = 0; i < full.checkpoint.params.size(); ++i)
    CHECK(disabled.checkpoint.params[i].data ==
          full.checkpoint.params[i].data);
}

TEST_CASE("dropout perturbs training only when enabled") {
  Dataset train = ToDataset(sv::GenerateCorpus(TrainableConfig()).train);
  TrainConfig cfg = QuickTrain();
  cfg.loss = "softmax";
  cfg.steps = 10;
  sv::TrainResult base = sv::TrainSoftmax(TinyDvector(), cfg, train);
  cfg.dropout = 0.5;
  sv::TrainResult dropped = sv::TrainSoftmax(TinyDvector(), cfg, train);
  CHECK(dropped.log != base.log);

  cfg.dropout = 0.0;
  sv::TrainResult off = sv::TrainSoftmax(TinyDvector(), cfg, train);
  CHECK(off.log == base.log);

  cfg.dropout = 1.0;
  CHECK_THROWS_AS(sv::TrainSoftmax(TinyDvector(), cfg, train),
                  sv::ConfigError);
  cfg.dropout = -0.1;
  CHECK_THROWS_AS(sv::TrainSoftmax(TinyDvector(), cfg, train),
                  sv::ConfigError);

  NetConfig lstm;
  lstm.kind = NetKind::kLstm;
  lstm.feat_dim = 3;
  lstm.window_frames = 10;
  lstm.lstm_hidden = 4;
  cfg.dropout = 0.5;
  CHECK_THROWS_AS(sv::TrainSoftmax(lstm, cfg, train), sv::ConfigError);
}

TEST_CASE("non-finite loss aborts with the last good step") {
  Dataset train = ToDataset(sv::GenerateCorpus(TrainableConfig()).train);
  Network net(TinyDvector());
  sv::Rng init_rng(1);
  std::vector<Matrix> poisoned = net.InitParams(init_rng);
  poisoned[0].data[0] = std::nan("");
  TrainConfig cfg = QuickTrain();
  try {
    sv::TrainEndToEnd(TinyDvector(), cfg, train, &poisoned);
    FAIL("expected TrainingDivergedError");
  } catch (const sv::TrainingDivergedError& e) {
    CHECK(std::string(e.what()).find("diverged") != std::string::npos);
    CHECK(e.last_good_step() == -1);
  }
  try {
    cfg.loss = "softmax";
    sv::TrainSoftmax(TinyDvector(), cfg, train, &poisoned);
    FAIL("expected TrainingDivergedError");
  } catch (const sv::TrainingDivergedError& e) {
    CHECK(e.last_good_step() == -1);
  }
}

TEST_CASE("runaway momentum is reported as divergence mid-run") {
  Dataset train = ToDataset(sv::GenerateCorpus(TrainableConfig()).train);
  TrainConfig cfg = QuickTrain();
  cfg.steps = 400;
  cfg.batch_size = 2;
  cfg.momentum = 100.0;  // geometric velocity growth overflows the params
  for (const std::string& loss : {"softmax", "e2e"}) {
    cfg.loss = loss;
    try {
      if (loss == "softmax")
        sv::TrainSoftmax(TinyDvector(), cfg, train);
      else
        sv::TrainEndToEnd(TinyDvector(), cfg, train);
      FAIL("expected TrainingDivergedError for " << loss);
    } catch (const sv::TrainingDivergedError& e) {
      CHECK(e.last_good_step() >= 0);
      CHECK(std::string(e.what()).find("diverged") != std::string::npos);
    }
  }
}

TEST_CASE("initial parameters can come from a previous checkpoint") {
  Dataset train = ToDataset(sv::GenerateCorpus(TrainableConfig()).train);
  TrainConfig cfg = QuickTrain();
  cfg.loss = "softmax";
  cfg.steps = 10;
  sv::TrainResult pre = sv::TrainSoftmax(TinyDvector(), cfg, train);
  std::vector<Matrix> net_params = pre.checkpoint.NetParams();

  cfg.loss = "e2e";
  cfg.steps = 0;
  sv::TrainResult handoff =
      sv::TrainEndToEnd(TinyDvector(), cfg, train, &net_params);
  CHECK(handoff.log.empty());
  REQUIRE(handoff.checkpoint.params.size() == net_params.size() + 2);
  for (size_t i = 0; i < net_params.size(); ++i)
    CHECK(handoff.checkpoint.params[i].data == net_params[i].data);
  CHECK(handoff.checkpoint.params[net_params.size()].data[0] == 10.0);
  CHECK(handoff.checkpoint.params[net_params.size() + 1].data[0] == -5.0);

  // Mismatched shapes are rejected.
  NetConfig other = TinyDvector();
  other.dvector_hidden = {4, 4};
  CHECK_THROWS_AS(sv::TrainEndToEnd(other, cfg, train, &net_params),
                  sv::ContractError);
  std::vector<Matrix> truncated(net_params.begin(), net_params.end() - 1);
  CHECK_THROWS_AS(sv::TrainEndToEnd(TinyDvector(), cfg, train, &truncated),
                  sv::ContractError);
}

TEST_CASE("held-out evaluation validates its protocol") {
  sv::SynthConfig synth = TrainableConfig();
  Dataset heldout = ToDataset(sv::GenerateCorpus(synth).heldout);
  Network net(TinyDvector());
  sv::Rng init_rng(2);
  std::vector<Matrix> params = net.InitParams(init_rng);
  double eer = HeldoutEer(net, params, heldout, 3);
  CHECK(eer >= 0.0);
  CHECK(eer <= 1.0);
  // 8 utterances per speaker leave nothing to test at enroll_count 8.
  CHECK_THROWS_AS(HeldoutEer(net, params, heldout, 8), sv::ContractError);
  CHECK_THROWS_AS(HeldoutEer(net, params, heldout, 0), sv::ConfigError);
}

TEST_CASE("model-size sweep returns ascending deterministic rows") {
  sv::SynthConfig synth = TrainableConfig();
  sv::SyntheticCorpus corpus = sv::GenerateCorpus(synth);
  Dataset train = ToDataset(corpus.train);
  Dataset heldout = ToDataset(corpus.heldout);
  TrainConfig cfg = QuickTrain();
  cfg.steps = 15;

  auto rows = sv::SweepModelSize(TinyDvector(), cfg, train, heldout, {3, 1}, 3);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].size == 1);
  CHECK(rows[1].size == 3);
  for (const auto& r : rows) {
    CHECK(r.eer_raw >= 0.0);
    CHECK(r.eer_raw <= 1.0);
  }
  auto again =
      sv::SweepModelSize(TinyDvector(), cfg, train, heldout, {1, 3}, 3);
  CHECK(again[0].eer_raw == rows[0].eer_raw);
  CHECK(again[1].eer_raw == rows[1].eer_raw);

  auto single = sv::SweepModelSize(TinyDvector(), cfg, train, heldout, {2}, 3);
  CHECK(single.size() == 1);
  CHECK(single[0].size == 2);
  CHECK_THROWS_AS(sv::SweepModelSize(TinyDvector(), cfg, train, heldout, {}, 3),
                  sv::ContractError);
}
