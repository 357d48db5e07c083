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

#include "sv/checkpoint.h"

#include <cstring>

#include "sv/common.h"
#include "sv/io.h"

namespace sv {

namespace {

constexpr char kMagic[] = "SVMODEL1";

class Reader {
 public:
  Reader(const std::vector<uint8_t>& bytes, const std::string& path)
      : bytes_(bytes), path_(path) {}

  uint32_t U32() {
    Need(4);
    uint32_t v = GetU32Le(&bytes_[pos_]);
    pos_ += 4;
    return v;
  }
  float F32() {
    Need(4);
    float v = GetF32Le(&bytes_[pos_]);
    pos_ += 4;
    return v;
  }
  void Need(size_t n) const {
    if (pos_ + n > bytes_.size())
      throw IoError("CheckpointLoad: " + path_ + " is truncated");
  }
  bool AtEnd() const { return pos_ == bytes_.size(); }

 private:
  const std::vector<uint8_t>& bytes_;
  std::string path_;
  size_t pos_ = 8;  // past magic
};

int CheckedDim(uint32_t v, const char* what) {
  if (v == 0 || v > (1u << 24))
    throw IoError(std::string("CheckpointLoad: implausible ") + what);
  return static_cast<int>(v);
}

}  // namespace

std::vector<Matrix> Checkpoint::NetParams() const {
  size_t n_head = 0;
  if (head != HeadKind::kNone) n_head = 2;
  if (params.size() < n_head)
    throw ContractError("Checkpoint::NetParams: malformed parameter list");
  return std::vector<Matrix>(params.begin(), params.end() - n_head);
}

std::vector<std::pair<int, int>> CheckpointShapes(const NetConfig& net,
                                                  HeadKind head,
                                                  int n_speakers) {
  Network network(net);
  auto shapes = network.ParamShapes();
  switch (head) {
    case HeadKind::kNone:
      break;
    case HeadKind::kSoftmax:
      if (n_speakers < 1)
        throw ContractError("CheckpointShapes: softmax head needs speakers");
      shapes.emplace_back(n_speakers, network.RepDim());
      shapes.emplace_back(n_speakers, 1);
      break;
    case HeadKind::kE2e:
      shapes.emplace_back(1, 1);
      shapes.emplace_back(1, 1);
      break;
  }
  return shapes;
}

void CheckpointSave(const std::string& path, const Checkpoint& ckpt) {
  auto shapes = CheckpointShapes(ckpt.net, ckpt.head, ckpt.n_speakers);
  if (shapes.size() != ckpt.params.size())
    throw ContractError("CheckpointSave: parameter count mismatch");
  for (size_t i = 0; i < shapes.size(); ++i)
    if (ckpt.params[i].rows != shapes[i].first ||
        ckpt.params[i].cols != shapes[i].second)
      throw ContractError("CheckpointSave: parameter shape mismatch at index " +
                          std::to_string(i));

  std::string out = kMagic;
  const NetConfig& net = ckpt.net;
  PutU32Le(out, static_cast<uint32_t>(net.kind));
  switch (net.kind) {
    case NetKind::kDnn:
      PutU32Le(out, static_cast<uint32_t>(net.feat_dim));
      PutU32Le(out, static_cast<uint32_t>(net.window_frames));
      PutU32Le(out, static_cast<uint32_t>(net.patch_rows));
      PutU32Le(out, static_cast<uint32_t>(net.patch_cols));
      PutU32Le(out, static_cast<uint32_t>(net.patch_units));
      PutU32Le(out, static_cast<uint32_t>(net.rep_dim));
      PutU32Le(out, static_cast<uint32_t>(net.dnn_hidden.size()));
      for (int h : net.dnn_hidden) PutU32Le(out, static_cast<uint32_t>(h));
      break;
    case NetKind::kDvector:
      PutU32Le(out, static_cast<uint32_t>(net.feat_dim));
      PutU32Le(out, static_cast<uint32_t>(net.context));
      PutU32Le(out, static_cast<uint32_t>(net.dvector_hidden.size()));
      for (int h : net.dvector_hidden) PutU32Le(out, static_cast<uint32_t>(h));
      break;
    case NetKind::kLstm:
      PutU32Le(out, static_cast<uint32_t>(net.feat_dim));
      PutU32Le(out, static_cast<uint32_t>(net.window_frames));
      PutU32Le(out, static_cast<uint32_t>(net.lstm_hidden));
      break;
  }
  PutU32Le(out, static_cast<uint32_t>(ckpt.head));
  if (ckpt.head == HeadKind::kSoftmax)
    PutU32Le(out, static_cast<uint32_t>(ckpt.n_speakers));
  for (const Matrix& m : ckpt.params)
    for (double v : m.data) PutF32Le(out, static_cast<float>(v));
  WriteFileBytes(path, out);
}

Checkpoint CheckpointLoad(const std::string& path) {
  std::vector<uint8_t> bytes = ReadFileBytes(path);
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kMagic, 8) != 0)
    throw IoError("CheckpointLoad: " + path + " is not a model checkpoint");
  Reader r(bytes, path);

  Checkpoint ckpt;
  uint32_t kind = r.U32();
  if (kind > 2) throw IoError("CheckpointLoad: unknown network kind");
  NetConfig& net = ckpt.net;
  net.kind = static_cast<NetKind>(kind);
  switch (net.kind) {
    case NetKind::kDnn: {
      net.feat_dim = CheckedDim(r.U32(), "feat_dim");
      net.window_frames = CheckedDim(r.U32(), "window_frames");
      net.patch_rows = CheckedDim(r.U32(), "patch_rows");
      net.patch_cols = CheckedDim(r.U32(), "patch_cols");
      net.patch_units = CheckedDim(r.U32(), "patch_units");
      net.rep_dim = CheckedDim(r.U32(), "rep_dim");
      uint32_t n = r.U32();
      net.dnn_hidden.clear();
      for (uint32_t i = 0; i < n; ++i)
        net.dnn_hidden.push_back(CheckedDim(r.U32(), "hidden width"));
      break;
    }
    case NetKind::kDvector: {
      net.feat_dim = CheckedDim(r.U32(), "feat_dim");
      net.context = static_cast<int>(r.U32());
      uint32_t n = r.U32();
      net.dvector_hidden.clear();
      for (uint32_t i = 0; i < n; ++i)
        net.dvector_hidden.push_back(CheckedDim(r.U32(), "hidden width"));
      break;
    }
    case NetKind::kLstm:
      net.feat_dim = CheckedDim(r.U32(), "feat_dim");
      net.window_frames = CheckedDim(r.U32(), "window_frames");
      net.lstm_hidden = CheckedDim(r.U32(), "lstm_hidden");
      break;
  }
  uint32_t head = r.U32();
  if (head > 2) throw IoError("CheckpointLoad: unknown head kind");
  ckpt.head = static_cast<HeadKind>(head);
  if (ckpt.head == HeadKind::kSoftmax)
    ckpt.n_speakers = CheckedDim(r.U32(), "speaker count");

  for (const auto& [rows, cols] : CheckpointShapes(net, ckpt.head,
                                                   ckpt.n_speakers)) {
    Matrix m(rows, cols);
    for (double& v : m.data) v = static_cast<double>(r.F32());
    ckpt.params.push_back(std::move(m));
  }
  if (!r.AtEnd())
    throw IoError("CheckpointLoad: " + path + " has trailing bytes");
  return ckpt;
}

}  // namespace sv
