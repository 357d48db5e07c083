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
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "sv/common.h"
#include "sv/io.h"
#include "sv/network.h"
#include "sv/rng.h"
#include "sv/scoring.h"

namespace {

using sv::CosineScore;
using sv::E2eHead;
using sv::Enroll;
using sv::Matrix;
using sv::NetConfig;
using sv::NetKind;
using sv::Network;
using sv::SpeakerModel;

Matrix Vec(std::initializer_list<double> vals) {
  Matrix m(static_cast<int>(vals.size()), 1);
  int i = 0;
  for (double v : vals) m.data[i++] = v;
  return m;
}

Matrix RandomMatrix(sv::Rng& rng, int r, int c, double scale = 1.0) {
  Matrix m(r, c);
  for (double& v : m.data) v = rng.Uniform(-scale, scale);
  return m;
}

NetConfig TinyDvector() {
  NetConfig cfg;
  cfg.kind = NetKind::kDvector;
  cfg.feat_dim = 3;
  cfg.context = 1;
  cfg.dvector_hidden = {4, 5};
  return cfg;
}

std::vector<Matrix> RandomParams(const Network& net, sv::Rng& rng,
                                 double scale = 0.5) {
  std::vector<Matrix> params;
  for (auto [r, c] : net.ParamShapes())
    params.push_back(RandomMatrix(rng, r, c, scale));
  return params;
}

std::string TempPath(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string FileString(const std::string& path) {
  std::vector<uint8_t> bytes = sv::ReadFileBytes(path);
  return std::string(bytes.begin(), bytes.end());
}

}  // namespace

TEST_CASE("cosine score on hand-computed vectors") {
  CHECK(CosineScore(Vec({1, 0}), Vec({0, 1})) == 0.0);
  CHECK(CosineScore(Vec({1, 2, 2}), Vec({2, 4, 4})) == 1.0);
  CHECK(CosineScore(Vec({1, 2, 2}), Vec({-1, -2, -2})) == -1.0);
  CHECK(CosineScore(Vec({3, 4}), Vec({4, 3})) == 24.0 / 25.0);
}

TEST_CASE("cosine self-similarity is exactly one") {
  sv::Rng rng(11);
  for (int it = 0; it < 200; ++it) {
    int dim = 1 + rng.UniformInt(32);
    double scale = std::pow(10.0, rng.Uniform(-8.0, 8.0));
    Matrix v = RandomMatrix(rng, dim, 1, scale);
    bool zero = true;
    for (double x : v.data) zero = zero && x == 0.0;
    if (zero) v.data[0] = scale;
    CHECK(CosineScore(v, v) == 1.0);
  }
}

TEST_CASE("cosine score is scale invariant") {
  sv::Rng rng(12);
  for (double alpha : {1e-6, 0.5, 3.7, 1e6}) {
    for (int it = 0; it < 50; ++it) {
      Matrix a = RandomMatrix(rng, 8, 1);
      Matrix b = RandomMatrix(rng, 8, 1);
      double base = CosineScore(a, b);
      Matrix scaled = a;
      for (double& v : scaled.data) v *= alpha;
      CHECK(std::abs(CosineScore(scaled, b) - base) <= 1e-12);
    }
  }
}

TEST_CASE("negating one side negates the score exactly") {
  sv::Rng rng(13);
  Matrix a = RandomMatrix(rng, 6, 1);
  Matrix b = RandomMatrix(rng, 6, 1);
  Matrix neg = a;
  for (double& v : neg.data) v = -v;
  CHECK(CosineScore(neg, b) == -CosineScore(a, b));
}

TEST_CASE("zero-norm vectors are rejected") {
  Matrix z(4, 1);
  Matrix v = Vec({1, 2, 3, 4});
  CHECK_THROWS_AS(CosineScore(z, v), sv::DegenerateInputError);
  CHECK_THROWS_AS(CosineScore(v, z), sv::DegenerateInputError);
  CHECK_THROWS_AS(CosineScore(z, z), sv::DegenerateInputError);
}

TEST_CASE("enroll averages the utterance representations") {
  Network net(TinyDvector());
  sv::Rng rng(21);
  std::vector<Matrix> params = RandomParams(net, rng);
  std::vector<Matrix> utts;
  for (int i = 0; i < 3; ++i) utts.push_back(RandomMatrix(rng, 6, 3));
  SpeakerModel model = Enroll(net, params, "spk1", utts);
  CHECK(model.speaker == "spk1");
  CHECK(model.count == 3);
  CHECK(model.vec.rows == net.RepDim());
  CHECK(model.vec.cols == 1);
  for (int i = 0; i < model.vec.Size(); ++i) {
    double mean = (sv::NetworkRep(net, params, utts[0]).data[i] +
                   sv::NetworkRep(net, params, utts[1]).data[i] +
                   sv::NetworkRep(net, params, utts[2]).data[i]) /
                  3.0;
    CHECK(model.vec.data[i] == doctest::Approx(mean).epsilon(1e-12));
  }
}

TEST_CASE("single enrollment utterance reproduces its representation") {
  Network net(TinyDvector());
  sv::Rng rng(22);
  std::vector<Matrix> params = RandomParams(net, rng);
  Matrix utt = RandomMatrix(rng, 5, 3);
  SpeakerModel model = Enroll(net, params, "spk1", {utt});
  Matrix rep = sv::NetworkRep(net, params, utt);
  CHECK(model.vec.data == rep.data);
  CHECK(CosineScore(model.vec, rep) == 1.0);
  // The enrollment utterance itself must be accepted at any threshold <= 1.
  for (double thr : {-1.0, 0.0, 0.5, 1.0}) {
    sv::Decision d = sv::Verify(net, params, model, utt, thr);
    CHECK(d.score == 1.0);
    CHECK(d.threshold == thr);
    CHECK(d.accept);
  }
  CHECK_FALSE(sv::Verify(net, params, model, utt, 1.0000000001).accept);
}

TEST_CASE("duplicating the sole enrollment utterance changes nothing") {
  Network net(TinyDvector());
  sv::Rng rng(23);
  std::vector<Matrix> params = RandomParams(net, rng);
  Matrix utt = RandomMatrix(rng, 4, 3);
  SpeakerModel one = Enroll(net, params, "s", {utt});
  SpeakerModel two = Enroll(net, params, "s", {utt, utt});
  CHECK(two.count == 2);
  CHECK(two.vec.data == one.vec.data);
}

TEST_CASE("enrollment order does not matter") {
  Network net(TinyDvector());
  sv::Rng rng(24);
  std::vector<Matrix> params = RandomParams(net, rng);
  std::vector<Matrix> utts;
  for (int i = 0; i < 5; ++i) utts.push_back(RandomMatrix(rng, 6, 3));
  SpeakerModel fwd = Enroll(net, params, "s", utts);
  std::vector<Matrix> shuffled = {utts[3], utts[0], utts[4], utts[2], utts[1]};
  SpeakerModel perm = Enroll(net, params, "s", shuffled);
  for (int i = 0; i < fwd.vec.Size(); ++i)
    CHECK(perm.vec.data[i] ==
          doctest::Approx(fwd.vec.data[i]).epsilon(1e-12).scale(1.0));
}

TEST_CASE("enrollment size limits are enforced") {
  Network net(TinyDvector());
  sv::Rng rng(25);
  std::vector<Matrix> params = RandomParams(net, rng);
  std::vector<Matrix> utts;
  for (int i = 0; i < 9; ++i) utts.push_back(RandomMatrix(rng, 4, 3));
  CHECK(Enroll(net, params, "s", utts).count == 9);
  utts.push_back(RandomMatrix(rng, 4, 3));
  CHECK_THROWS_WITH_AS(Enroll(net, params, "s", utts),
                       doctest::Contains("configured maximum is 9"),
                       sv::ContractError);
  CHECK_THROWS_AS(Enroll(net, params, "s", {}), sv::ContractError);
  std::vector<Matrix> four(utts.begin(), utts.begin() + 4);
  CHECK_THROWS_AS(Enroll(net, params, "s", four, 3), sv::ContractError);
}

TEST_CASE("all-zero network yields a degenerate model") {
  Network net(TinyDvector());
  std::vector<Matrix> params;
  for (auto [r, c] : net.ParamShapes()) params.push_back(Matrix(r, c));
  sv::Rng rng(26);
  Matrix utt = RandomMatrix(rng, 4, 3);
  CHECK_THROWS_AS(Enroll(net, params, "s", {utt}), sv::DegenerateInputError);
}

TEST_CASE("verify accepts exactly at the threshold") {
  Network net(TinyDvector());
  sv::Rng rng(27);
  std::vector<Matrix> params = RandomParams(net, rng);
  SpeakerModel model = Enroll(net, params, "s", {RandomMatrix(rng, 5, 3)});
  Matrix test = RandomMatrix(rng, 5, 3);
  double score = sv::Verify(net, params, model, test, 0.0).score;
  CHECK(sv::Verify(net, params, model, test, score).accept);
  double above = std::nextafter(score, 2.0);
  CHECK_FALSE(sv::Verify(net, params, model, test, above).accept);
  CHECK(sv::Verify(net, params, model, test, -1.0).accept);
}

TEST_CASE("head threshold is minus b over w") {
  E2eHead head;
  head.w = 4.0;
  head.b = -2.0;
  CHECK(head.Threshold() == 0.5);
  CHECK(head.ProbAccept(0.5) == 0.5);
  head.w = 0.0;
  CHECK_THROWS_AS(head.Threshold(), sv::DegenerateInputError);
}

TEST_CASE("head decision agrees with the threshold rule") {
  sv::Rng rng(31);
  for (int it = 0; it < 1000; ++it) {
    E2eHead head;
    head.w = rng.Uniform(0.1, 20.0);
    head.b = rng.Uniform(-10.0, 10.0);
    double s = rng.Uniform(-1.5, 1.5);
    CHECK((head.ProbAccept(s) >= 0.5) == (s >= head.Threshold()));
  }
  // Negative w flips the orientation: accept means score <= -b/w.
  for (int it = 0; it < 1000; ++it) {
    E2eHead head;
    head.w = -rng.Uniform(0.1, 20.0);
    head.b = rng.Uniform(-10.0, 10.0);
    double s = rng.Uniform(-1.5, 1.5);
    CHECK((head.ProbAccept(s) >= 0.5) == (s <= head.Threshold()));
  }
}

TEST_CASE("accept probability is stable at extreme arguments") {
  E2eHead head;
  head.w = 1000.0;
  head.b = 0.0;
  double hi = head.ProbAccept(1.0);
  double lo = head.ProbAccept(-1.0);
  CHECK(std::isfinite(hi));
  CHECK(std::isfinite(lo));
  CHECK(hi <= 1.0);
  CHECK(lo >= 0.0);
  CHECK(hi > 0.999999);
  CHECK(lo < 1e-6);
  head.w = 3.0;
  head.b = 0.7;
  for (double s : {-1.0, -0.25, 0.0, 0.4, 1.0})
    CHECK(head.ProbAccept(s) + head.ProbAccept(-s - 2.0 * head.b / head.w) ==
          doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("verify with head matches the explicit threshold") {
  Network net(TinyDvector());
  sv::Rng rng(32);
  std::vector<Matrix> params = RandomParams(net, rng);
  SpeakerModel model = Enroll(net, params, "s", {RandomMatrix(rng, 5, 3)});
  Matrix test = RandomMatrix(rng, 5, 3);
  E2eHead head;
  head.w = 6.0;
  head.b = -1.2;
  sv::Decision with_head = sv::VerifyWithHead(net, params, model, test, head);
  sv::Decision plain =
      sv::Verify(net, params, model, test, head.Threshold());
  CHECK(with_head.score == plain.score);
  CHECK(with_head.threshold == head.Threshold());
  CHECK(with_head.accept == plain.accept);
  // With w < 0 the same threshold value selects the other side.
  E2eHead flipped;
  flipped.w = -6.0;
  flipped.b = 1.2;
  CHECK(flipped.Threshold() == head.Threshold());
  sv::Decision rev = sv::VerifyWithHead(net, params, model, test, flipped);
  CHECK(rev.accept == (rev.score <= flipped.Threshold()));
  if (with_head.score != with_head.threshold)
    CHECK(rev.accept != with_head.accept);
}

TEST_CASE("speaker model file round-trip") {
  SpeakerModel model;
  model.speaker = "spk042";
  model.count = 7;
  sv::Rng rng(41);
  model.vec = RandomMatrix(rng, 16, 1, 3.0);
  std::string path = TempPath("sv_scoring_model.svspk");
  sv::SpeakerModelSave(path, model);
  std::string bytes = FileString(path);
  CHECK(bytes.substr(0, 6) == "SVSPK1");
  SpeakerModel loaded = sv::SpeakerModelLoad(path);
  CHECK(loaded.speaker == "spk042");
  CHECK(loaded.count == 7);
  REQUIRE(loaded.vec.rows == 16);
  // Values survive exactly at float32 precision.
  for (int i = 0; i < 16; ++i)
    CHECK(loaded.vec.data[i] ==
          static_cast<double>(static_cast<float>(model.vec.data[i])));
  std::string path2 = TempPath("sv_scoring_model2.svspk");
  sv::SpeakerModelSave(path2, loaded);
  CHECK(FileString(path2) == bytes);
  std::filesystem::remove(path);
  std::filesystem::remove(path2);
}

TEST_CASE("malformed speaker model files are rejected") {
  SpeakerModel model;
  model.speaker = "a";
  model.count = 1;
  model.vec = Vec({1.0, -2.0});
  std::string path = TempPath("sv_scoring_bad.svspk");
  sv::SpeakerModelSave(path, model);
  std::string good = FileString(path);

  std::string bad = good;
  bad[4] = 'X';
  sv::WriteFileBytes(path, bad);
  CHECK_THROWS_AS(sv::SpeakerModelLoad(path), sv::IoError);

  sv::WriteFileBytes(path, good.substr(0, good.size() - 1));
  CHECK_THROWS_AS(sv::SpeakerModelLoad(path), sv::IoError);

  sv::WriteFileBytes(path, good + "x");
  CHECK_THROWS_AS(sv::SpeakerModelLoad(path), sv::IoError);

  sv::WriteFileBytes(path, "SVSPK");
  CHECK_THROWS_AS(sv::SpeakerModelLoad(path), sv::IoError);

  SpeakerModel empty;
  CHECK_THROWS_AS(sv::SpeakerModelSave(path, empty), sv::ContractError);
  std::filesystem::remove(path);
}
