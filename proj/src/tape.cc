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

#include "sv/tape.h"

#include <cmath>
#include <string>

namespace sv {

namespace {

constexpr double kProbClamp = 1e-12;

double StableSigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  double e = std::exp(x);
  return e / (1.0 + e);
}

void CheckVector(const Matrix& m, const char* op) {
  if (!m.IsVector())
    throw DimensionError(std::string(op) + ": expected a column vector, got " +
                         std::to_string(m.rows) + "x" + std::to_string(m.cols));
}

}  // namespace

const Tape::Node& Tape::At(VarId id) const {
  if (id < 0 || id >= static_cast<VarId>(nodes_.size()))
    throw ContractError("Tape: invalid variable id " + std::to_string(id));
  return nodes_[id];
}

double Tape::ScalarValue(VarId id) const {
  const Matrix& v = At(id).value;
  if (!v.IsScalar()) throw ContractError("Tape::ScalarValue: value is not scalar");
  return v.data[0];
}

VarId Tape::PushNode(Op op, Matrix value, const std::vector<VarId>& inputs,
                     const std::vector<double>& daux,
                     const std::vector<int>& iaux) {
  Node node;
  node.op = op;
  node.in_offset = static_cast<int>(input_pool_.size());
  node.in_count = static_cast<int>(inputs.size());
  input_pool_.insert(input_pool_.end(), inputs.begin(), inputs.end());
  node.daux_offset = static_cast<int>(daux_pool_.size());
  node.daux_count = static_cast<int>(daux.size());
  daux_pool_.insert(daux_pool_.end(), daux.begin(), daux.end());
  node.iaux_offset = static_cast<int>(iaux_pool_.size());
  node.iaux_count = static_cast<int>(iaux.size());
  iaux_pool_.insert(iaux_pool_.end(), iaux.begin(), iaux.end());
  node.value = std::move(value);
  nodes_.push_back(std::move(node));
  grads_valid_ = false;
  return static_cast<VarId>(nodes_.size()) - 1;
}

void Tape::Reset() {
  nodes_.clear();
  input_pool_.clear();
  daux_pool_.clear();
  iaux_pool_.clear();
  grads_valid_ = false;
}

VarId Tape::Leaf(const Matrix& value) {
  if (!value.AllFinite()) throw ContractError("Tape::Leaf: non-finite entries");
  return PushNode(Op::kLeaf, value, {});
}

VarId Tape::Constant(const Matrix& value) {
  if (!value.AllFinite())
    throw ContractError("Tape::Constant: non-finite entries");
  return PushNode(Op::kConstant, value, {});
}

VarId Tape::Affine(VarId x, VarId w, VarId b) {
  const Matrix& xv = At(x).value;
  const Matrix& wv = At(w).value;
  const Matrix& bv = At(b).value;
  CheckVector(xv, "Affine");
  CheckVector(bv, "Affine");
  if (wv.cols != xv.rows || wv.rows != bv.rows)
    throw DimensionError("Affine: W is " + std::to_string(wv.rows) + "x" +
                         std::to_string(wv.cols) + ", x has " +
                         std::to_string(xv.rows) + " rows, b has " +
                         std::to_string(bv.rows));
  Matrix y(wv.rows, 1);
  for (int i = 0; i < wv.rows; ++i) {
    double s = bv.data[i];
    const double* wrow = &wv.data[static_cast<size_t>(i) * wv.cols];
    for (int j = 0; j < wv.cols; ++j) s += wrow[j] * xv.data[j];
    y.data[i] = s;
  }
  return PushNode(Op::kAffine, std::move(y), {x, w, b});
}

VarId Tape::AffinePair(VarId x1, VarId w1, VarId x2, VarId w2, VarId b) {
  const Matrix& x1v = At(x1).value;
  const Matrix& w1v = At(w1).value;
  const Matrix& x2v = At(x2).value;
  const Matrix& w2v = At(w2).value;
  const Matrix& bv = At(b).value;
  CheckVector(x1v, "AffinePair");
  CheckVector(x2v, "AffinePair");
  CheckVector(bv, "AffinePair");
  if (w1v.cols != x1v.rows || w2v.cols != x2v.rows || w1v.rows != w2v.rows ||
      w1v.rows != bv.rows)
    throw DimensionError("AffinePair: operand shapes do not conform");
  Matrix y(w1v.rows, 1);
  for (int i = 0; i < w1v.rows; ++i) {
    double s = bv.data[i];
    const double* r1 = &w1v.data[static_cast<size_t>(i) * w1v.cols];
    for (int j = 0; j < w1v.cols; ++j) s += r1[j] * x1v.data[j];
    const double* r2 = &w2v.data[static_cast<size_t>(i) * w2v.cols];
    for (int j = 0; j < w2v.cols; ++j) s += r2[j] * x2v.data[j];
    y.data[i] = s;
  }
  return PushNode(Op::kAffinePair, std::move(y), {x1, w1, x2, w2, b});
}

VarId Tape::Relu(VarId x) {
  Matrix y = At(x).value;
  for (double& v : y.data) v = v > 0.0 ? v : 0.0;
  return PushNode(Op::kRelu, std::move(y), {x});
}

VarId Tape::Sigmoid(VarId x) {
  Matrix y = At(x).value;
  for (double& v : y.data) v = StableSigmoid(v);
  return PushNode(Op::kSigmoid, std::move(y), {x});
}

VarId Tape::Tanh(VarId x) {
  Matrix y = At(x).value;
  for (double& v : y.data) v = std::tanh(v);
  return PushNode(Op::kTanh, std::move(y), {x});
}

VarId Tape::Add(VarId a, VarId b) {
  const Matrix& av = At(a).value;
  const Matrix& bv = At(b).value;
  if (!av.SameShape(bv)) throw DimensionError("Add: shape mismatch");
  Matrix y = av;
  for (size_t i = 0; i < y.data.size(); ++i) y.data[i] += bv.data[i];
  return PushNode(Op::kAdd, std::move(y), {a, b});
}

VarId Tape::Mul(VarId a, VarId b) {
  const Matrix& av = At(a).value;
  const Matrix& bv = At(b).value;
  if (!av.SameShape(bv)) throw DimensionError("Mul: shape mismatch");
  Matrix y = av;
  for (size_t i = 0; i < y.data.size(); ++i) y.data[i] *= bv.data[i];
  return PushNode(Op::kMul, std::move(y), {a, b});
}

VarId Tape::Scale(VarId x, double c) {
  Matrix y = At(x).value;
  for (double& v : y.data) v *= c;
  return PushNode(Op::kScale, std::move(y), {x}, {c});
}

VarId Tape::Concat(const std::vector<VarId>& parts) {
  if (parts.empty()) throw ContractError("Concat: no inputs");
  int total = 0;
  for (VarId p : parts) {
    CheckVector(At(p).value, "Concat");
    total += At(p).value.rows;
  }
  Matrix y(total, 1);
  int at = 0;
  for (VarId p : parts) {
    const Matrix& v = At(p).value;
    std::copy(v.data.begin(), v.data.end(), y.data.begin() + at);
    at += v.rows;
  }
  return PushNode(Op::kConcat, std::move(y), parts);
}

VarId Tape::Slice(VarId x, int offset, int len) {
  const Matrix& xv = At(x).value;
  CheckVector(xv, "Slice");
  if (offset < 0 || len <= 0 || offset + len > xv.rows)
    throw DimensionError("Slice: range [" + std::to_string(offset) + ", " +
                         std::to_string(offset + len) + ") out of bounds for " +
                         std::to_string(xv.rows) + " rows");
  Matrix y(len, 1);
  std::copy(xv.data.begin() + offset, xv.data.begin() + offset + len,
            y.data.begin());
  return PushNode(Op::kSlice, std::move(y), {x}, {}, {offset, len});
}

VarId Tape::ExtractPatch(VarId grid, int grid_cols, int row0, int col0,
                         int patch_rows, int patch_cols) {
  const Matrix& gv = At(grid).value;
  CheckVector(gv, "ExtractPatch");
  if (grid_cols <= 0 || gv.rows % grid_cols != 0)
    throw DimensionError("ExtractPatch: grid length not divisible by cols");
  int grid_rows = gv.rows / grid_cols;
  if (row0 < 0 || col0 < 0 || row0 + patch_rows > grid_rows ||
      col0 + patch_cols > grid_cols)
    throw DimensionError("ExtractPatch: patch exceeds grid bounds");
  Matrix y(patch_rows * patch_cols, 1);
  for (int r = 0; r < patch_rows; ++r) {
    for (int c = 0; c < patch_cols; ++c) {
      y.data[static_cast<size_t>(r) * patch_cols + c] =
          gv.data[static_cast<size_t>(row0 + r) * grid_cols + (col0 + c)];
    }
  }
  return PushNode(Op::kExtractPatch, std::move(y), {grid}, {},
                  {grid_cols, row0, col0, patch_rows, patch_cols});
}

VarId Tape::WeightedAverage(const std::vector<VarId>& xs,
                            const std::vector<double>& weights) {
  if (xs.empty() || xs.size() != weights.size())
    throw ContractError("WeightedAverage: inputs and weights must pair up");
  double wsum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw ContractError("WeightedAverage: negative weight");
    wsum += w;
  }
  if (wsum <= 0.0)
    throw DegenerateInputError("WeightedAverage: all weights are zero");
  const Matrix& first = At(xs[0]).value;
  for (VarId x : xs) {
    if (!At(x).value.SameShape(first))
      throw DimensionError("WeightedAverage: shape mismatch");
  }
  Matrix y(first.rows, first.cols);
  for (size_t k = 0; k < xs.size(); ++k) {
    if (weights[k] == 0.0) continue;  // exact no-op for masked entries
    const Matrix& v = At(xs[k]).value;
    double w = weights[k];
    for (size_t i = 0; i < y.data.size(); ++i) y.data[i] += w * v.data[i];
  }
  for (double& v : y.data) v /= wsum;
  std::vector<double> daux = weights;
  daux.push_back(wsum);
  return PushNode(Op::kWeightedAverage, std::move(y), xs, daux);
}

VarId Tape::CosineSimilarity(VarId f, VarId m) {
  const Matrix& fv = At(f).value;
  const Matrix& mv = At(m).value;
  CheckVector(fv, "CosineSimilarity");
  CheckVector(mv, "CosineSimilarity");
  if (fv.rows != mv.rows)
    throw DimensionError("CosineSimilarity: dimension mismatch");
  double nf = Norm(fv);
  double nm = Norm(mv);
  if (nf == 0.0 || nm == 0.0)
    throw DegenerateInputError("CosineSimilarity: zero-norm argument");
  double s = Dot(fv, mv) / (nf * nm);
  return PushNode(Op::kCosine, Matrix::Scalar(s), {f, m}, {nf, nm, s});
}

VarId Tape::SumEntries(VarId x) {
  double s = 0.0;
  for (double v : At(x).value.data) s += v;
  return PushNode(Op::kSumEntries, Matrix::Scalar(s), {x});
}

VarId Tape::Mean(const std::vector<VarId>& scalars) {
  if (scalars.empty()) throw ContractError("Mean: no inputs");
  double s = 0.0;
  for (VarId id : scalars) s += ScalarValue(id);
  s /= static_cast<double>(scalars.size());
  return PushNode(Op::kMean, Matrix::Scalar(s), scalars);
}

VarId Tape::SoftmaxCrossEntropy(VarId y, VarId w, VarId b, int speaker) {
  int k = At(w).value.rows;
  std::vector<int> all(k);
  for (int i = 0; i < k; ++i) all[i] = i;
  return SoftmaxCrossEntropySubset(y, w, b, speaker, all);
}

VarId Tape::SoftmaxCrossEntropySubset(VarId y, VarId w, VarId b, int speaker,
                                      const std::vector<int>& candidates) {
  const Matrix& yv = At(y).value;
  const Matrix& wv = At(w).value;
  const Matrix& bv = At(b).value;
  CheckVector(yv, "SoftmaxCrossEntropy");
  if (wv.cols != yv.rows || bv.rows != wv.rows)
    throw DimensionError("SoftmaxCrossEntropy: head shape mismatch");
  if (candidates.empty())
    throw ContractError("SoftmaxCrossEntropy: empty candidate set");
  int speaker_slot = -1;
  for (size_t i = 0; i < candidates.size(); ++i) {
    int c = candidates[i];
    if (c < 0 || c >= wv.rows)
      throw ContractError("SoftmaxCrossEntropy: candidate index " +
                          std::to_string(c) + " out of range");
    if (c == speaker) speaker_slot = static_cast<int>(i);
  }
  if (speaker < 0 || speaker >= wv.rows)
    throw ContractError("SoftmaxCrossEntropy: speaker index " +
                        std::to_string(speaker) + " out of range");
  if (speaker_slot < 0)
    throw ContractError("SoftmaxCrossEntropy: true speaker not in candidates");

  int n = static_cast<int>(candidates.size());
  std::vector<double> logits(n);
  for (int i = 0; i < n; ++i) {
    int c = candidates[i];
    double s = bv.data[c];
    const double* row = &wv.data[static_cast<size_t>(c) * wv.cols];
    for (int j = 0; j < wv.cols; ++j) s += row[j] * yv.data[j];
    logits[i] = s;
  }
  double max_logit = logits[0];
  for (double v : logits) max_logit = std::max(max_logit, v);
  double denom = 0.0;
  for (double v : logits) denom += std::exp(v - max_logit);
  double loss = -(logits[speaker_slot] - max_logit - std::log(denom));

  // Posterior over candidates, saved for the backward pass.
  std::vector<double> daux(n);
  for (int i = 0; i < n; ++i) daux[i] = std::exp(logits[i] - max_logit) / denom;
  std::vector<int> iaux;
  iaux.reserve(n + 1);
  iaux.push_back(speaker_slot);
  iaux.insert(iaux.end(), candidates.begin(), candidates.end());
  return PushNode(Op::kSoftmax, Matrix::Scalar(loss), {y, w, b}, daux, iaux);
}

VarId Tape::NegLogBernoulli(VarId p_accept, bool accept) {
  const Matrix& pv = At(p_accept).value;
  if (!pv.IsScalar()) throw ContractError("NegLogBernoulli: p must be scalar");
  double p = pv.data[0];
  double pc = std::min(std::max(p, kProbClamp), 1.0 - kProbClamp);
  if (pc != p) {
    if (clamp_events_ == 0)
      SV_WARN("NegLogBernoulli: probability clamped to ("
              << kProbClamp << ", " << 1.0 - kProbClamp
              << "); saturated score head, consider a smaller learning rate");
    ++clamp_events_;
  }
  double q = accept ? pc : 1.0 - pc;
  double loss = -std::log(q);
  return PushNode(Op::kNegLogBernoulli, Matrix::Scalar(loss), {p_accept}, {pc},
                  {accept ? 1 : 0});
}

void Tape::Backward(VarId loss) {
  const Node& top = At(loss);
  if (!top.value.IsScalar())
    throw ContractError("Tape::Backward: loss must be scalar");
  for (Node& n : nodes_) {
    n.grad = Matrix(n.value.rows, n.value.cols);
  }
  nodes_[loss].grad.data[0] = 1.0;
  for (int id = loss; id >= 0; --id) BackwardNode(id);
  grads_valid_ = true;
}

const Matrix& Tape::Gradient(VarId id) const {
  if (!grads_valid_)
    throw ContractError("Tape::Gradient: call Backward() first");
  return At(id).grad;
}

void Tape::BackwardNode(int id) {
  Node& node = nodes_[id];
  const Matrix& gy = node.grad;
  const VarId* in = node.in_count > 0 ? &input_pool_[node.in_offset] : nullptr;
  const double* daux =
      node.daux_count > 0 ? &daux_pool_[node.daux_offset] : nullptr;
  const int* iaux = node.iaux_count > 0 ? &iaux_pool_[node.iaux_offset] : nullptr;

  switch (node.op) {
    case Op::kLeaf:
    case Op::kConstant:
      break;
    case Op::kAffine: {
      Matrix& gx = nodes_[in[0]].grad;
      Matrix& gw = nodes_[in[1]].grad;
      Matrix& gb = nodes_[in[2]].grad;
      const Matrix& xv = nodes_[in[0]].value;
      const Matrix& wv = nodes_[in[1]].value;
      for (int i = 0; i < wv.rows; ++i) {
        double g = gy.data[i];
        if (g == 0.0) continue;
        gb.data[i] += g;
        const double* wrow = &wv.data[static_cast<size_t>(i) * wv.cols];
        double* gwrow = &gw.data[static_cast<size_t>(i) * wv.cols];
        for (int j = 0; j < wv.cols; ++j) {
          gwrow[j] += g * xv.data[j];
          gx.data[j] += g * wrow[j];
        }
      }
      break;
    }
    case Op::kAffinePair: {
      const Matrix& x1v = nodes_[in[0]].value;
      const Matrix& w1v = nodes_[in[1]].value;
      const Matrix& x2v = nodes_[in[2]].value;
      const Matrix& w2v = nodes_[in[3]].value;
      Matrix& gx1 = nodes_[in[0]].grad;
      Matrix& gw1 = nodes_[in[1]].grad;
      Matrix& gx2 = nodes_[in[2]].grad;
      Matrix& gw2 = nodes_[in[3]].grad;
      Matrix& gb = nodes_[in[4]].grad;
      for (int i = 0; i < w1v.rows; ++i) {
        double g = gy.data[i];
        if (g == 0.0) continue;
        gb.data[i] += g;
        const double* r1 = &w1v.data[static_cast<size_t>(i) * w1v.cols];
        double* g1 = &gw1.data[static_cast<size_t>(i) * w1v.cols];
        for (int j = 0; j < w1v.cols; ++j) {
          g1[j] += g * x1v.data[j];
          gx1.data[j] += g * r1[j];
        }
        const double* r2 = &w2v.data[static_cast<size_t>(i) * w2v.cols];
        double* g2 = &gw2.data[static_cast<size_t>(i) * w2v.cols];
        for (int j = 0; j < w2v.cols; ++j) {
          g2[j] += g * x2v.data[j];
          gx2.data[j] += g * r2[j];
        }
      }
      break;
    }
    case Op::kRelu: {
      Matrix& gx = nodes_[in[0]].grad;
      const Matrix& xv = nodes_[in[0]].value;
      for (size_t i = 0; i < gx.data.size(); ++i)
        if (xv.data[i] > 0.0) gx.data[i] += gy.data[i];
      break;
    }
    case Op::kSigmoid: {
      Matrix& gx = nodes_[in[0]].grad;
      for (size_t i = 0; i < gx.data.size(); ++i) {
        double y = node.value.data[i];
        gx.data[i] += gy.data[i] * y * (1.0 - y);
      }
      break;
    }
    case Op::kTanh: {
      Matrix& gx = nodes_[in[0]].grad;
      for (size_t i = 0; i < gx.data.size(); ++i) {
        double y = node.value.data[i];
        gx.data[i] += gy.data[i] * (1.0 - y * y);
      }
      break;
    }
    case Op::kAdd: {
      Matrix& ga = nodes_[in[0]].grad;
      Matrix& gb = nodes_[in[1]].grad;
      for (size_t i = 0; i < gy.data.size(); ++i) {
        ga.data[i] += gy.data[i];
        gb.data[i] += gy.data[i];
      }
      break;
    }
    case Op::kMul: {
      Matrix& ga = nodes_[in[0]].grad;
      Matrix& gb = nodes_[in[1]].grad;
      const Matrix& av = nodes_[in[0]].value;
      const Matrix& bv = nodes_[in[1]].value;
      for (size_t i = 0; i < gy.data.size(); ++i) {
        ga.data[i] += gy.data[i] * bv.data[i];
        gb.data[i] += gy.data[i] * av.data[i];
      }
      break;
    }
    case Op::kScale: {
      Matrix& gx = nodes_[in[0]].grad;
      double c = daux[0];
      for (size_t i = 0; i < gy.data.size(); ++i) gx.data[i] += c * gy.data[i];
      break;
    }
    case Op::kConcat: {
      int at = 0;
      for (int k = 0; k < node.in_count; ++k) {
        Matrix& gp = nodes_[in[k]].grad;
        for (int i = 0; i < gp.rows; ++i) gp.data[i] += gy.data[at + i];
        at += gp.rows;
      }
      break;
    }
    case Op::kSlice: {
      Matrix& gx = nodes_[in[0]].grad;
      int offset = iaux[0];
      int len = iaux[1];
      for (int i = 0; i < len; ++i) gx.data[offset + i] += gy.data[i];
      break;
    }
    case Op::kExtractPatch: {
      Matrix& gg = nodes_[in[0]].grad;
      int grid_cols = iaux[0], row0 = iaux[1], col0 = iaux[2];
      int patch_rows = iaux[3], patch_cols = iaux[4];
      for (int r = 0; r < patch_rows; ++r)
        for (int c = 0; c < patch_cols; ++c)
          gg.data[static_cast<size_t>(row0 + r) * grid_cols + (col0 + c)] +=
              gy.data[static_cast<size_t>(r) * patch_cols + c];
      break;
    }
    case Op::kWeightedAverage: {
      double wsum = daux[node.in_count];
      for (int k = 0; k < node.in_count; ++k) {
        double w = daux[k];
        if (w == 0.0) continue;  // masked entries receive exactly zero
        Matrix& gx = nodes_[in[k]].grad;
        double coef = w / wsum;
        for (size_t i = 0; i < gy.data.size(); ++i)
          gx.data[i] += coef * gy.data[i];
      }
      break;
    }
    case Op::kCosine: {
      double nf = daux[0], nm = daux[1], s = daux[2];
      double g = gy.data[0];
      const Matrix& fv = nodes_[in[0]].value;
      const Matrix& mv = nodes_[in[1]].value;
      Matrix& gf = nodes_[in[0]].grad;
      Matrix& gm = nodes_[in[1]].grad;
      double cross = 1.0 / (nf * nm);
      for (int i = 0; i < fv.rows; ++i) {
        gf.data[i] += g * (mv.data[i] * cross - s * fv.data[i] / (nf * nf));
        gm.data[i] += g * (fv.data[i] * cross - s * mv.data[i] / (nm * nm));
      }
      break;
    }
    case Op::kSumEntries: {
      Matrix& gx = nodes_[in[0]].grad;
      double g = gy.data[0];
      for (double& v : gx.data) v += g;
      break;
    }
    case Op::kMean: {
      double g = gy.data[0] / static_cast<double>(node.in_count);
      for (int k = 0; k < node.in_count; ++k) nodes_[in[k]].grad.data[0] += g;
      break;
    }
    case Op::kSoftmax: {
      double g = gy.data[0];
      if (g == 0.0) break;
      int speaker_slot = iaux[0];
      const int* candidates = iaux + 1;
      int n = node.iaux_count - 1;
      const Matrix& yv = nodes_[in[0]].value;
      const Matrix& wv = nodes_[in[1]].value;
      Matrix& gyv = nodes_[in[0]].grad;
      Matrix& gw = nodes_[in[1]].grad;
      Matrix& gb = nodes_[in[2]].grad;
      for (int i = 0; i < n; ++i) {
        int c = candidates[i];
        double dz = daux[i] - (i == speaker_slot ? 1.0 : 0.0);
        dz *= g;
        gb.data[c] += dz;
        const double* wrow = &wv.data[static_cast<size_t>(c) * wv.cols];
        double* gwrow = &gw.data[static_cast<size_t>(c) * wv.cols];
        for (int j = 0; j < wv.cols; ++j) {
          gwrow[j] += dz * yv.data[j];
          gyv.data[j] += dz * wrow[j];
        }
      }
      break;
    }
    case Op::kNegLogBernoulli: {
      Matrix& gp = nodes_[in[0]].grad;
      double pc = daux[0];
      bool accept = iaux[0] != 0;
      double d = accept ? -1.0 / pc : 1.0 / (1.0 - pc);
      gp.data[0] += gy.data[0] * d;
      break;
    }
  }
}

}  // namespace sv
