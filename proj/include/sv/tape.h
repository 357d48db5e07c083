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

#ifndef SV_TAPE_H_
#define SV_TAPE_H_

#include <cstdint>
#include <vector>

#include "sv/matrix.h"

namespace sv {

using VarId = int32_t;

// Reverse-mode gradient tape over dense matrices. The op set is exactly
// what the networks and losses in this toolkit need; there is no
// broadcasting and no graph rewriting. Replaying the tape backward visits
// ops in reverse execution order and accumulates gradients of the same
// shape as each value.
//
// A tape is single-threaded: one training step owns one tape. Reset()
// reuses the allocated storage for the next step.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Differentiable leaf (parameter or input).
  VarId Leaf(const Matrix& value);
  // Non-differentiable value (no gradient is accumulated for it).
  VarId Constant(const Matrix& value);

  // W x + b for column vector x.
  VarId Affine(VarId x, VarId w, VarId b);
  // W1 x1 + W2 x2 + b; used by recurrent cells.
  VarId AffinePair(VarId x1, VarId w1, VarId x2, VarId w2, VarId b);
  // Elementwise max(0, x); the subgradient at exactly 0 is 0.
  VarId Relu(VarId x);
  // Elementwise logistic function, branch on sign for stability.
  VarId Sigmoid(VarId x);
  VarId Tanh(VarId x);
  VarId Add(VarId a, VarId b);
  // Elementwise product.
  VarId Mul(VarId a, VarId b);
  VarId Scale(VarId x, double c);
  // Stack column vectors into one column vector.
  VarId Concat(const std::vector<VarId>& parts);
  // Contiguous sub-range [offset, offset+len) of a column vector.
  VarId Slice(VarId x, int offset, int len);
  // Rectangular patch of a row-major grid stored as a flat column vector.
  VarId ExtractPatch(VarId grid, int grid_cols, int row0, int col0,
                     int patch_rows, int patch_cols);
  // sum_i w_i x_i / sum_i w_i over same-shaped vectors. Zero-weight inputs
  // are skipped entirely so they cannot perturb values or gradients.
  VarId WeightedAverage(const std::vector<VarId>& xs,
                        const std::vector<double>& weights);
  // f . m / (|f| |m|); throws DegenerateInputError on a zero-norm side.
  VarId CosineSimilarity(VarId f, VarId m);
  VarId SumEntries(VarId x);
  // Mean of scalar values (batch loss).
  VarId Mean(const std::vector<VarId>& scalars);
  // -log softmax_{speaker}(W y + b), max-logit subtraction for stability.
  VarId SoftmaxCrossEntropy(VarId y, VarId w, VarId b, int speaker);
  // Same, restricted to a candidate subset that must contain the speaker.
  VarId SoftmaxCrossEntropySubset(VarId y, VarId w, VarId b, int speaker,
                                  const std::vector<int>& candidates);
  // -log p(target) for a Bernoulli accept probability. Probabilities at
  // 0 or 1 are clamped to [1e-12, 1 - 1e-12] and a warning is counted.
  VarId NegLogBernoulli(VarId p_accept, bool accept);

  const Matrix& Value(VarId id) const { return nodes_[id].value; }
  double ScalarValue(VarId id) const;

  // Seeds d(loss)/d(loss) = 1 and propagates to every node on the tape.
  // loss must be scalar. All gradients are reset first, so Backward can
  // be called more than once.
  void Backward(VarId loss);
  // Valid after Backward(); zero matrix for nodes off the loss's path.
  const Matrix& Gradient(VarId id) const;

  void Reset();
  int NumNodes() const { return static_cast<int>(nodes_.size()); }
  int64_t clamp_events() const { return clamp_events_; }

 private:
  enum class Op : uint8_t {
    kLeaf,
    kConstant,
    kAffine,
    kAffinePair,
    kRelu,
    kSigmoid,
    kTanh,
    kAdd,
    kMul,
    kScale,
    kConcat,
    kSlice,
    kExtractPatch,
    kWeightedAverage,
    kCosine,
    kSumEntries,
    kMean,
    kSoftmax,
    kNegLogBernoulli,
  };

  struct Node {
    Op op;
    int in_offset = 0;
    int in_count = 0;
    int daux_offset = 0;
    int daux_count = 0;
    int iaux_offset = 0;
    int iaux_count = 0;
    Matrix value;
    Matrix grad;
  };

  VarId PushNode(Op op, Matrix value, const std::vector<VarId>& inputs,
                 const std::vector<double>& daux = {},
                 const std::vector<int>& iaux = {});
  const Node& At(VarId id) const;
  void BackwardNode(int id);

  std::vector<Node> nodes_;
  std::vector<VarId> input_pool_;
  std::vector<double> daux_pool_;
  std::vector<int> iaux_pool_;
  bool grads_valid_ = false;
  int64_t clamp_events_ = 0;
};

}  // namespace sv

#endif  // SV_TAPE_H_
