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

#ifndef SV_TRAIN_H_
#define SV_TRAIN_H_

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "sv/checkpoint.h"
#include "sv/dataset.h"
#include "sv/network.h"
#include "sv/rng.h"

namespace sv {

struct TrainConfig {
  std::string loss = "e2e";  // e2e | softmax
  int n_enroll = 5;          // speaker model size N during training
  int batch_size = 32;
  double learning_rate = 0.05;
  double momentum = 0.9;
  int steps = 2000;
  uint64_t seed = 1;
  double target_ratio = 0.5;
  int pool_capacity = 1024;
  int pool_refresh_period = 64;
  int softmax_candidates = 0;  // 0 or >= num speakers disables sampling
  double dropout = 0.0;        // rate on the final linear layer's input
  double e2e_init_w = 10.0;
  double e2e_init_b = -5.0;
};

// FIFO pool of speaker groups fed from the dataset's speaker list in order,
// wrapping at the end (each wrap is one pass over the speaker stream).
class UtterancePool {
 public:
  UtterancePool(const Dataset& dataset, int capacity);

  // Inserts the next not-yet-pooled speaker group, then evicts the oldest
  // groups until the pool fits the capacity again.
  void Refresh();

  int size() const { return total_; }
  // Pooled utterance dataset indices, flattened in group order.
  const std::vector<int>& Flattened() const { return flattened_; }
  // Dataset indices of the group owning a speaker, or nullptr.
  const std::vector<int>* Group(const std::string& speaker) const;
  const std::deque<std::string>& GroupOrder() const { return order_; }
  const Dataset& dataset() const { return dataset_; }

 private:
  void Insert(const std::string& speaker);
  void EvictUntilFits();
  void Rebuild();

  const Dataset& dataset_;
  int capacity_;
  int total_ = 0;
  int cursor_ = 0;  // next speaker in the stream
  std::deque<std::string> order_;
  std::map<std::string, std::vector<int>> groups_;
  std::vector<int> flattened_;
};

// One 1+N training trial over dataset indices. Shortfall entries repeat the
// first enrollment index with use-weight 0 and must behave as exact no-ops.
struct TrainingTrial {
  int test = -1;
  std::vector<int> enroll;
  std::vector<double> weights;
  bool target = true;
};

// Picks a test utterance uniformly from the pool, then builds an accept
// trial (same-speaker enrollment, never the test utterance itself) with
// probability target_ratio, else a reject trial drawn from one other
// speaker's group.
TrainingTrial SampleTrial(const UtterancePool& pool, int n,
                          double target_ratio, Rng& rng);

struct TrainResult {
  Checkpoint checkpoint;
  std::vector<std::pair<int, double>> log;  // (step, batch loss)
};

// End-to-end training: mean logistic loss over cosine scores of sampled
// trials; gradients flow into every weight-1 enrollment representation.
// init_net_params, when given, replaces random initialization (softmax
// pre-training handoff).
TrainResult TrainEndToEnd(const NetConfig& net_config,
                          const TrainConfig& config, const Dataset& dataset,
                          const std::vector<Matrix>* init_net_params = nullptr);

// Per-utterance softmax over training speakers, optionally with candidate
// sampling and inverted dropout on the final linear layer's input.
TrainResult TrainSoftmax(const NetConfig& net_config, const TrainConfig& config,
                         const Dataset& dataset,
                         const std::vector<Matrix>* init_net_params = nullptr);

struct SweepRow {
  int size = 0;
  double eer_raw = 0.0;
};

// Trains one end-to-end model per speaker-model size (shared seed), scores
// the held-out all-pairs protocol, and returns rows sorted by size.
std::vector<SweepRow> SweepModelSize(const NetConfig& net_config,
                                     const TrainConfig& config,
                                     const Dataset& train_set,
                                     const Dataset& heldout_set,
                                     const std::vector<int>& sizes,
                                     int enroll_count);

// Held-out all-pairs evaluation used by the sweep and the acceptance
// experiments: enrolls the first enroll_count utterances per speaker and
// scores the remainder against every speaker.
double HeldoutEer(const Network& net, const std::vector<Matrix>& net_params,
                  const Dataset& heldout_set, int enroll_count);

}  // namespace sv

#endif  // SV_TRAIN_H_
