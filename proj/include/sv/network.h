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

#ifndef SV_NETWORK_H_
#define SV_NETWORK_H_

#include <string>
#include <vector>

#include "sv/matrix.h"
#include "sv/rng.h"
#include "sv/tape.h"

namespace sv {

enum class NetKind { kDnn = 0, kDvector = 1, kLstm = 2 };

NetKind NetKindFromString(const std::string& s);
std::string NetKindToString(NetKind kind);

struct NetConfig {
  NetKind kind = NetKind::kDnn;
  int feat_dim = 40;
  // Frames per fixed window; used by the utterance-level DNN and the LSTM.
  // The frame-level d-vector consumes the whole utterance instead.
  int window_frames = 80;
  // Utterance-level DNN: locally-connected first layer (untied weights per
  // patch), then fully-connected ReLU hiddens, then a final linear layer.
  int patch_rows = 10;
  int patch_cols = 10;
  int patch_units = 16;
  std::vector<int> dnn_hidden = {504, 504, 504};
  int rep_dim = 504;
  // Frame-level d-vector: per-frame DNN over the frame stacked with +/-
  // context frames (edges replicated); the representation is the average of
  // the last hidden layer, so rep dim is dvector_hidden.back().
  int context = 2;
  std::vector<int> dvector_hidden = {504, 504, 504, 504};
  // Single LSTM layer, no projection; the representation is h_T.
  int lstm_hidden = 504;
};

// Builds one LSTM time step on the tape. gate_params holds, for each of the
// gates i, f, g (cell candidate), o in that order: W_x (h x d), W_h (h x h),
// b (h x 1), twelve matrices total.
struct LstmStepVars {
  VarId h;
  VarId c;
};
LstmStepVars LstmStep(Tape& tape, VarId x, VarId h_prev, VarId c_prev,
                      const std::vector<VarId>& gate_params);

class Network {
 public:
  explicit Network(NetConfig config);

  const NetConfig& config() const { return config_; }
  NetKind kind() const { return config_.kind; }
  int RepDim() const;
  int NumPatches() const;

  // Parameter matrix shapes in declaration (serialization) order.
  std::vector<std::pair<int, int>> ParamShapes() const;
  int64_t NumParams() const;

  // Xavier-uniform weights, zero biases, LSTM forget-gate bias 1.0.
  std::vector<Matrix> InitParams(Rng& rng) const;

  // Builds the representation subgraph for one utterance. params must be
  // tape variables in ParamShapes() order. dropout_mask, when non-null,
  // multiplies the input of the final linear layer (DNN) or the averaged
  // representation (d-vector) elementwise. input_leaf, when non-null,
  // receives the id of the stacked input leaf.
  VarId BuildRep(Tape& tape, const std::vector<VarId>& params,
                 const Matrix& fbank, const Matrix* dropout_mask = nullptr,
                 VarId* input_leaf = nullptr) const;

 private:
  VarId BuildDnn(Tape& tape, const std::vector<VarId>& params,
                 const Matrix& fbank, const Matrix* dropout_mask,
                 VarId* input_leaf) const;
  VarId BuildDvector(Tape& tape, const std::vector<VarId>& params,
                     const Matrix& fbank, const Matrix* dropout_mask,
                     VarId* input_leaf) const;
  VarId BuildLstm(Tape& tape, const std::vector<VarId>& params,
                  const Matrix& fbank, VarId* input_leaf) const;

  NetConfig config_;
};

// Convenience forward pass on a scratch tape; returns the representation
// values only.
Matrix NetworkRep(const Network& net, const std::vector<Matrix>& params,
                  const Matrix& fbank);

}  // namespace sv

#endif  // SV_NETWORK_H_
