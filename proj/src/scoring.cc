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

#include "sv/scoring.h"

#include <cmath>
#include <cstring>

#include "sv/common.h"
#include "sv/io.h"

namespace sv {

double E2eHead::Threshold() const {
  if (w == 0.0) throw DegenerateInputError("E2eHead: w is zero");
  return -b / w;
}

double E2eHead::ProbAccept(double score) const {
  double z = w * score + b;
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

double CosineScore(const Matrix& a, const Matrix& b) {
  double qa = Dot(a, a);
  double qb = Dot(b, b);
  if (qa == 0.0 || qb == 0.0)
    throw DegenerateInputError("CosineScore: zero-norm vector");
  // sqrt(qa * qb) keeps the self-similarity of any vector exactly 1.0.
  return Dot(a, b) / std::sqrt(qa * qb);
}

SpeakerModel Enroll(const Network& net, const std::vector<Matrix>& params,
                    const std::string& speaker,
                    const std::vector<Matrix>& utterances, int max_enroll) {
  if (utterances.empty())
    throw ContractError("Enroll: no utterances for speaker " + speaker);
  if (max_enroll > 0 && static_cast<int>(utterances.size()) > max_enroll)
    throw ContractError("Enroll: speaker " + speaker + " has " +
                        std::to_string(utterances.size()) +
                        " enrollment utterances, configured maximum is " +
                        std::to_string(max_enroll));
  SpeakerModel model;
  model.speaker = speaker;
  model.count = static_cast<int>(utterances.size());
  model.vec = Matrix(net.RepDim(), 1);
  for (const Matrix& utt : utterances) {
    Matrix rep = NetworkRep(net, params, utt);
    for (size_t i = 0; i < model.vec.data.size(); ++i)
      model.vec.data[i] += rep.data[i];
  }
  for (double& v : model.vec.data) v /= model.count;
  if (Norm(model.vec) == 0.0)
    throw DegenerateInputError("Enroll: zero-norm model for " + speaker);
  return model;
}

Decision Verify(const Network& net, const std::vector<Matrix>& params,
                const SpeakerModel& model, const Matrix& test,
                double threshold) {
  Matrix rep = NetworkRep(net, params, test);
  Decision d;
  d.score = CosineScore(rep, model.vec);
  d.threshold = threshold;
  d.accept = d.score >= threshold;
  return d;
}

Decision VerifyWithHead(const Network& net, const std::vector<Matrix>& params,
                        const SpeakerModel& model, const Matrix& test,
                        const E2eHead& head) {
  Matrix rep = NetworkRep(net, params, test);
  Decision d;
  d.score = CosineScore(rep, model.vec);
  d.threshold = head.Threshold();
  d.accept = head.ProbAccept(d.score) >= 0.5;
  return d;
}

void SpeakerModelSave(const std::string& path, const SpeakerModel& model) {
  if (model.count < 1 || model.vec.Size() == 0)
    throw ContractError("SpeakerModelSave: empty model");
  std::string out = "SVSPK1";
  PutU32Le(out, static_cast<uint32_t>(model.speaker.size()));
  out += model.speaker;
  PutU32Le(out, static_cast<uint32_t>(model.count));
  PutU32Le(out, static_cast<uint32_t>(model.vec.rows));
  for (double v : model.vec.data) PutF32Le(out, static_cast<float>(v));
  WriteFileBytes(path, out);
}

SpeakerModel SpeakerModelLoad(const std::string& path) {
  std::vector<uint8_t> bytes = ReadFileBytes(path);
  if (bytes.size() < 6 || std::memcmp(bytes.data(), "SVSPK1", 6) != 0)
    throw IoError("SpeakerModelLoad: " + path + " is not a speaker model");
  size_t pos = 6;
  auto need = [&](size_t n) {
    if (pos + n > bytes.size())
      throw IoError("SpeakerModelLoad: " + path + " is truncated");
  };
  need(4);
  uint32_t id_len = GetU32Le(&bytes[pos]);
  pos += 4;
  need(id_len);
  SpeakerModel model;
  model.speaker.assign(reinterpret_cast<const char*>(&bytes[pos]), id_len);
  pos += id_len;
  need(8);
  model.count = static_cast<int>(GetU32Le(&bytes[pos]));
  uint32_t dim = GetU32Le(&bytes[pos + 4]);
  pos += 8;
  if (model.count < 1 || dim == 0 || dim > (1u << 24))
    throw IoError("SpeakerModelLoad: " + path + " has implausible fields");
  need(static_cast<size_t>(dim) * 4);
  model.vec = Matrix(static_cast<int>(dim), 1);
  for (uint32_t i = 0; i < dim; ++i)
    model.vec.data[i] = static_cast<double>(GetF32Le(&bytes[pos + i * 4]));
  pos += static_cast<size_t>(dim) * 4;
  if (pos != bytes.size())
    throw IoError("SpeakerModelLoad: " + path + " has trailing bytes");
  return model;
}

}  // namespace sv
