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

#ifndef SV_EVAL_H_
#define SV_EVAL_H_

#include <map>
#include <string>
#include <vector>

#include "sv/io.h"
#include "sv/matrix.h"
#include "sv/network.h"
#include "sv/scoring.h"

namespace sv {

struct EerResult {
  double eer = 0.0;
  double threshold = 0.0;
};

// Sweeps thresholds over all distinct scores. FRR(t) is the fraction of
// targets with score < t, FAR(t) the fraction of nontargets with score >= t;
// the crossing is linearly interpolated between adjacent operating points
// when the rates never meet exactly.
EerResult ComputeEer(const std::vector<double>& targets,
                     const std::vector<double>& nontargets);

// (FAR, FRR) operating points, one per distinct threshold plus a final
// above-max point; FAR non-increasing, FRR non-decreasing.
std::vector<std::pair<double, double>> DetPoints(
    const std::vector<double>& targets, const std::vector<double>& nontargets);

// (raw - mean) / population-std of the given cohort scores. Invariant under
// a shared affine map a * s + c (a > 0) of raw and cohort scores alike.
double TNormScores(double raw, const std::vector<double>& cohort_scores);

// (raw - mean) / population-std of the test representation's cosine scores
// against the cohort models.
double TNorm(double raw, const Matrix& test_rep,
             const std::vector<SpeakerModel>& cohort);

struct EvalReport {
  std::vector<ScoreRecord> records;
  double eer_raw = 0.0;
  double threshold = 0.0;
  bool has_tnorm = false;
  double eer_tnorm = 0.0;
  int n_trials = 0;
  // Trials skipped because the claimed speaker or test utterance is unknown.
  std::vector<std::string> skipped;
};

// Scores every trial against the frozen network, in trial-list order.
// Passing a cohort enables t-norm columns and the t-norm EER.
EvalReport Evaluate(const Network& net, const std::vector<Matrix>& params,
                    const std::map<std::string, SpeakerModel>& models,
                    const std::map<std::string, Matrix>& test_features,
                    const std::vector<TrialEntry>& trials,
                    const std::vector<SpeakerModel>* cohort = nullptr);

// All-pairs protocol trials: every (test utterance, speaker) pair from the
// given test list against the claimed-speaker list, labeled target when the
// claim matches the utterance's speaker.
std::vector<TrialEntry> MakeAllPairTrials(
    const std::vector<std::pair<std::string, std::string>>& test_utts,
    const std::vector<std::string>& speakers);

// Summary key=value lines: eer_raw=, eer_tnorm= (dash when absent),
// threshold=, n_trials=.
std::string FormatSummary(const EvalReport& report);

// DET TSV: far<TAB>frr rows from the raw scores.
void DetWrite(const std::string& path, const EvalReport& report);

}  // namespace sv

#endif  // SV_EVAL_H_
