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

#ifndef SV_SCORING_H_
#define SV_SCORING_H_

#include <string>
#include <vector>

#include "sv/matrix.h"
#include "sv/network.h"

namespace sv {

// Scalar logistic head over the cosine score: p(accept) =
// sigmoid(w * score + b). The decision threshold is -b/w.
struct E2eHead {
  double w = 10.0;
  double b = -5.0;

  double Threshold() const;
  double ProbAccept(double score) const;
};

struct SpeakerModel {
  std::string speaker;
  int count = 0;   // contributing utterances
  Matrix vec;      // raw average, not normalized
};

struct Decision {
  double score = 0.0;
  double threshold = 0.0;
  bool accept = false;
};

// Plain cosine similarity between two stored vectors.
double CosineScore(const Matrix& a, const Matrix& b);

// m_spk = unweighted average of f(X_i) over 1..max_enroll utterances.
SpeakerModel Enroll(const Network& net, const std::vector<Matrix>& params,
                    const std::string& speaker,
                    const std::vector<Matrix>& utterances, int max_enroll = 9);

// Scores a test utterance against the model at an explicit threshold;
// accept iff score >= threshold.
Decision Verify(const Network& net, const std::vector<Matrix>& params,
                const SpeakerModel& model, const Matrix& test,
                double threshold);

// Decision via the trained head: accept iff p(accept) >= 0.5, which matches
// score >= -b/w when w > 0 and flips when w < 0.
Decision VerifyWithHead(const Network& net, const std::vector<Matrix>& params,
                        const SpeakerModel& model, const Matrix& test,
                        const E2eHead& head);

// Speaker-model file: magic "SVSPK1", u32 id length, id bytes, u32 count,
// u32 dim, float32 vector.
void SpeakerModelSave(const std::string& path, const SpeakerModel& model);
SpeakerModel SpeakerModelLoad(const std::string& path);

}  // namespace sv

#endif  // SV_SCORING_H_
