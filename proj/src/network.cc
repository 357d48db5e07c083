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

#include "sv/network.h"

#include <algorithm>
#include <cmath>

#include "sv/common.h"
#include "sv/features.h"

namespace sv {

NetKind NetKindFromString(const std::string& s) {
  if (s == "dnn") return NetKind::kDnn;
  if (s == "dvector") return NetKind::kDvector;
  if (s == "lstm") return NetKind::kLstm;
  throw ConfigError("unknown network type '" + s +
                    "' (expected dnn, dvector, or lstm)");
}

std::string NetKindToString(NetKind kind) {
  switch (kind) {
    case NetKind::kDnn: return "dnn";
    case NetKind::kDvector: return "dvector";
    case NetKind::kLstm: return "lstm";
  }
  throw ContractError("NetKindToString: bad enum value");
}

LstmStepVars LstmStep(Tape& tape, VarId x, VarId h_prev, VarId c_prev,
                      const std::vector<VarId>& gate_params) {
  if (gate_params.size() != 12)
    throw ContractError("LstmStep: expected 12 gate parameter matrices");
  auto gate = [&](int g) {
    return tape.AffinePair(x, gate_params[3 * g], h_prev,
                           gate_params[3 * g + 1], gate_params[3 * g + 2]);
  };
  VarId i = tape.Sigmoid(gate(0));
  VarId f = tape.Sigmoid(gate(1));
  VarId g = tape.Tanh(gate(2));
  VarId o = tape.Sigmoid(gate(3));
  VarId c = tape.Add(tape.Mul(f, c_prev), tape.Mul(i, g));
  VarId h = tape.Mul(o, tape.Tanh(c));
  return {h, c};
}

Network::Network(NetConfig config) : config_(std::move(config)) {
  if (config_.feat_dim < 1) throw ConfigError("Network: feat_dim < 1");
  switch (config_.kind) {
    case NetKind::kDnn:
      if (config_.window_frames < 1 || config_.rep_dim < 1 ||
          config_.patch_units < 1)
        throw ConfigError("Network: bad DNN dimensions");
      if (config_.window_frames % config_.patch_rows != 0 ||
          config_.feat_dim % config_.patch_cols != 0)
        throw ConfigError(
            "Network: patch grid must tile the input exactly (" +
            std::to_string(config_.window_frames) + "x" +
            std::to_string(config_.feat_dim) + " window, " +
            std::to_string(config_.patch_rows) + "x" +
            std::to_string(config_.patch_cols) + " patches)");
      for (int h : config_.dnn_hidden)
        if (h < 1) throw ConfigError("Network: bad hidden width");
      break;
    case NetKind::kDvector:
      if (config_.context < 0) throw ConfigError("Network: context < 0");
      if (config_.dvector_hidden.empty())
        throw ConfigError("Network: d-vector needs at least one hidden layer");
      for (int h : config_.dvector_hidden)
        if (h < 1) throw ConfigError("Network: bad hidden width");
      break;
    case NetKind::kLstm:
      if (config_.lstm_hidden < 1 || config_.window_frames < 1)
        throw ConfigError("Network: bad LSTM dimensions");
      break;
  }
}

int Network::RepDim() const {
  switch (config_.kind) {
    case NetKind::kDnn: return config_.rep_dim;
    case NetKind::kDvector: return config_.dvector_hidden.back();
    case NetKind::kLstm: return config_.lstm_hidden;
  }
  throw ContractError("RepDim: bad enum value");
}

int Network::NumPatches() const {
  return (config_.window_frames / config_.patch_rows) *
         (config_.feat_dim / config_.patch_cols);
}

std::vector<std::pair<int, int>> Network::ParamShapes() const {
  std::vector<std::pair<int, int>> shapes;
  switch (config_.kind) {
    case NetKind::kDnn: {
      int patch_in = config_.patch_rows * config_.patch_cols;
      for (int p = 0; p < NumPatches(); ++p) {
        shapes.emplace_back(config_.patch_units, patch_in);
        shapes.emplace_back(config_.patch_units, 1);
      }
      int in = NumPatches() * config_.patch_units;
      for (int h : config_.dnn_hidden) {
        shapes.emplace_back(h, in);
        shapes.emplace_back(h, 1);
        in = h;
      }
      shapes.emplace_back(config_.rep_dim, in);
      shapes.emplace_back(config_.rep_dim, 1);
      break;
    }
    case NetKind::kDvector: {
      int in = config_.feat_dim * (2 * config_.context + 1);
      for (int h : config_.dvector_hidden) {
        shapes.emplace_back(h, in);
        shapes.emplace_back(h, 1);
        in = h;
      }
      break;
    }
    case NetKind::kLstm: {
      int h = config_.lstm_hidden;
      for (int g = 0; g < 4; ++g) {
        shapes.emplace_back(h, config_.feat_dim);
        shapes.emplace_back(h, h);
        shapes.emplace_back(h, 1);
      }
      break;
    }
  }
  return shapes;
}

int64_t Network::NumParams() const {
  int64_t n = 0;
  for (const auto& [r, c] : ParamShapes()) n += static_cast<int64_t>(r) * c;
  return n;
}

std::vector<Matrix> Network::InitParams(Rng& rng) const {
  std::vector<Matrix> params;
  for (const auto& [rows, cols] : ParamShapes()) {
    Matrix m(rows, cols);
    if (cols > 1) {
      double s = std::sqrt(6.0 / (rows + cols));
      for (double& v : m.data) v = rng.Uniform(-s, s);
    }
    params.push_back(std::move(m));
  }
  if (config_.kind == NetKind::kLstm) {
    // Forget-gate bias (gate order i, f, g, o; matrices Wx, Wh, b per gate).
    Matrix& fb = params[3 * 1 + 2];
    for (double& v : fb.data) v = 1.0;
  }
  return params;
}

VarId Network::BuildRep(Tape& tape, const std::vector<VarId>& params,
                        const Matrix& fbank, const Matrix* dropout_mask,
                        VarId* input_leaf) const {
  if (params.size() != ParamShapes().size())
    throw ContractError("BuildRep: wrong parameter count");
  if (fbank.cols != config_.feat_dim)
    throw DimensionError("BuildRep: features have " +
                         std::to_string(fbank.cols) + " dims, network expects " +
                         std::to_string(config_.feat_dim));
  switch (config_.kind) {
    case NetKind::kDnn:
      return BuildDnn(tape, params, fbank, dropout_mask, input_leaf);
    case NetKind::kDvector:
      return BuildDvector(tape, params, fbank, dropout_mask, input_leaf);
    case NetKind::kLstm:
      return BuildLstm(tape, params, fbank, input_leaf);
  }
  throw ContractError("BuildRep: bad enum value");
}

VarId Network::BuildDnn(Tape& tape, const std::vector<VarId>& params,
                        const Matrix& fbank, const Matrix* dropout_mask,
                        VarId* input_leaf) const {
  Matrix window = ExtractLastWindow(fbank, config_.window_frames);
  VarId input = tape.Leaf(StackFrames(window));
  if (input_leaf != nullptr) *input_leaf = input;

  int rows_of_patches = config_.window_frames / config_.patch_rows;
  int cols_of_patches = config_.feat_dim / config_.patch_cols;
  std::vector<VarId> patch_outputs;
  int k = 0;
  for (int pr = 0; pr < rows_of_patches; ++pr) {
    for (int pc = 0; pc < cols_of_patches; ++pc) {
      VarId patch = tape.ExtractPatch(
          input, config_.feat_dim, pr * config_.patch_rows,
          pc * config_.patch_cols, config_.patch_rows, config_.patch_cols);
      patch_outputs.push_back(
          tape.Relu(tape.Affine(patch, params[k], params[k + 1])));
      k += 2;
    }
  }
  VarId h = tape.Concat(patch_outputs);
  for (size_t i = 0; i < config_.dnn_hidden.size(); ++i) {
    h = tape.Relu(tape.Affine(h, params[k], params[k + 1]));
    k += 2;
  }
  if (dropout_mask != nullptr) h = tape.Mul(h, tape.Constant(*dropout_mask));
  return tape.Affine(h, params[k], params[k + 1]);
}

VarId Network::BuildDvector(Tape& tape, const std::vector<VarId>& params,
                            const Matrix& fbank, const Matrix* dropout_mask,
                            VarId* input_leaf) const {
  int t_count = fbank.rows;
  int d = config_.feat_dim;
  VarId input = tape.Leaf(StackFrames(fbank));
  if (input_leaf != nullptr) *input_leaf = input;

  std::vector<VarId> frame_reps;
  frame_reps.reserve(t_count);
  for (int t = 0; t < t_count; ++t) {
    std::vector<VarId> ctx;
    for (int k = -config_.context; k <= config_.context; ++k) {
      int src = std::clamp(t + k, 0, t_count - 1);
      ctx.push_back(tape.Slice(input, src * d, d));
    }
    VarId h = ctx.size() == 1 ? ctx[0] : tape.Concat(ctx);
    for (size_t i = 0; i < config_.dvector_hidden.size(); ++i)
      h = tape.Relu(tape.Affine(h, params[2 * i], params[2 * i + 1]));
    frame_reps.push_back(h);
  }
  VarId rep = tape.WeightedAverage(
      frame_reps, std::vector<double>(frame_reps.size(), 1.0));
  if (dropout_mask != nullptr)
    rep = tape.Mul(rep, tape.Constant(*dropout_mask));
  return rep;
}

VarId Network::BuildLstm(Tape& tape, const std::vector<VarId>& params,
                         const Matrix& fbank, VarId* input_leaf) const {
  Matrix window = ExtractLastWindow(fbank, config_.window_frames);
  VarId input = tape.Leaf(StackFrames(window));
  if (input_leaf != nullptr) *input_leaf = input;

  VarId h = tape.Constant(Matrix(config_.lstm_hidden, 1));
  VarId c = h;
  for (int t = 0; t < config_.window_frames; ++t) {
    VarId x = tape.Slice(input, t * config_.feat_dim, config_.feat_dim);
    LstmStepVars next = LstmStep(tape, x, h, c, params);
    h = next.h;
    c = next.c;
  }
  return h;
}

Matrix NetworkRep(const Network& net, const std::vector<Matrix>& params,
                  const Matrix& fbank) {
  Tape tape;
  std::vector<VarId> ids;
  ids.reserve(params.size());
  for (const Matrix& p : params) ids.push_back(tape.Leaf(p));
  VarId rep = net.BuildRep(tape, ids, fbank);
  return tape.Value(rep);
}

}  // namespace sv
