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

#include "sv/eval.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "sv/common.h"

namespace sv {

namespace {

// Distinct ascending candidate thresholds plus one above the maximum score,
// so the sweep always reaches (FAR 0, FRR 1).
std::vector<double> SweepThresholds(const std::vector<double>& targets,
                                    const std::vector<double>& nontargets) {
  std::vector<double> all;
  all.reserve(targets.size() + nontargets.size());
  all.insert(all.end(), targets.begin(), targets.end());
  all.insert(all.end(), nontargets.begin(), nontargets.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  all.push_back(all.back() + 1.0);
  return all;
}

struct Rates {
  double frr;
  double far;
};

Rates RatesAt(double t, const std::vector<double>& targets_sorted,
              const std::vector<double>& nontargets_sorted) {
  auto below_t = std::lower_bound(targets_sorted.begin(),
                                  targets_sorted.end(), t) -
                 targets_sorted.begin();
  auto below_n = std::lower_bound(nontargets_sorted.begin(),
                                  nontargets_sorted.end(), t) -
                 nontargets_sorted.begin();
  Rates r;
  r.frr = static_cast<double>(below_t) / targets_sorted.size();
  r.far = static_cast<double>(nontargets_sorted.size() - below_n) /
          nontargets_sorted.size();
  return r;
}

void CheckClasses(const std::vector<double>& targets,
                  const std::vector<double>& nontargets, const char* op) {
  if (targets.empty() || nontargets.empty())
    throw ContractError(std::string(op) +
                        ": need at least one target and one nontarget score");
  for (double v : targets)
    if (!std::isfinite(v)) throw ContractError(std::string(op) + ": non-finite score");
  for (double v : nontargets)
    if (!std::isfinite(v)) throw ContractError(std::string(op) + ": non-finite score");
}

// Mean and population std of a cohort score set.
std::pair<double, double> ScoreStats(const std::vector<double>& scores) {
  if (scores.size() < 2)
    throw ContractError("TNorm: cohort needs at least 2 models");
  double mean = 0.0;
  for (double s : scores) mean += s;
  mean /= scores.size();
  double var = 0.0;
  for (double s : scores) var += (s - mean) * (s - mean);
  var /= scores.size();
  double sd = std::sqrt(var);
  if (sd == 0.0)
    throw DegenerateInputError(
        "TNorm: cohort scores are constant for this test utterance");
  return {mean, sd};
}

// Cohort score mean and population std for one test representation.
std::pair<double, double> CohortStats(const Matrix& test_rep,
                                      const std::vector<SpeakerModel>& cohort) {
  std::vector<double> scores;
  scores.reserve(cohort.size());
  for (const SpeakerModel& m : cohort)
    scores.push_back(CosineScore(test_rep, m.vec));
  return ScoreStats(scores);
}

}  // namespace

EerResult ComputeEer(const std::vector<double>& targets,
                     const std::vector<double>& nontargets) {
  CheckClasses(targets, nontargets, "ComputeEer");
  std::vector<double> ts = targets, ns = nontargets;
  std::sort(ts.begin(), ts.end());
  std::sort(ns.begin(), ns.end());
  std::vector<double> sweep = SweepThresholds(targets, nontargets);

  double prev_t = sweep[0];
  Rates prev = RatesAt(prev_t, ts, ns);  // FRR 0, FAR 1 at the minimum score
  for (size_t i = 0; i < sweep.size(); ++i) {
    Rates cur = RatesAt(sweep[i], ts, ns);
    double d = cur.frr - cur.far;
    if (d == 0.0) return {cur.frr, sweep[i]};
    if (d > 0.0) {
      // Crossed between the previous point and this one; interpolate.
      double gap = (cur.frr - prev.frr) - (cur.far - prev.far);
      double alpha = (prev.far - prev.frr) / gap;
      return {prev.frr + alpha * (cur.frr - prev.frr),
              prev_t + alpha * (sweep[i] - prev_t)};
    }
    prev = cur;
    prev_t = sweep[i];
  }
  throw ContractError("ComputeEer: sweep never crossed (unreachable)");
}

std::vector<std::pair<double, double>> DetPoints(
    const std::vector<double>& targets, const std::vector<double>& nontargets) {
  CheckClasses(targets, nontargets, "DetPoints");
  std::vector<double> ts = targets, ns = nontargets;
  std::sort(ts.begin(), ts.end());
  std::sort(ns.begin(), ns.end());
  std::vector<std::pair<double, double>> points;
  for (double t : SweepThresholds(targets, nontargets)) {
    Rates r = RatesAt(t, ts, ns);
    points.emplace_back(r.far, r.frr);
  }
  return points;
}

double TNormScores(double raw, const std::vector<double>& cohort_scores) {
  auto [mean, sd] = ScoreStats(cohort_scores);
  return (raw - mean) / sd;
}

double TNorm(double raw, const Matrix& test_rep,
             const std::vector<SpeakerModel>& cohort) {
  auto [mean, sd] = CohortStats(test_rep, cohort);
  return (raw - mean) / sd;
}

EvalReport Evaluate(const Network& net, const std::vector<Matrix>& params,
                    const std::map<std::string, SpeakerModel>& models,
                    const std::map<std::string, Matrix>& test_features,
                    const std::vector<TrialEntry>& trials,
                    const std::vector<SpeakerModel>* cohort) {
  if (trials.empty()) throw ContractError("Evaluate: empty trial list");
  EvalReport report;
  report.has_tnorm = cohort != nullptr;

  std::map<std::string, Matrix> reps;
  std::map<std::string, std::pair<double, double>> tnorm_stats;
  for (const TrialEntry& trial : trials) {
    auto model_it = models.find(trial.claimed_speaker);
    auto feat_it = test_features.find(trial.test_utt);
    if (model_it == models.end() || feat_it == test_features.end()) {
      report.skipped.push_back(trial.trial_id);
      SV_WARN("Evaluate: skipping trial " << trial.trial_id << " ("
              << (model_it == models.end() ? "unknown speaker "
                                           : "unknown utterance ")
              << (model_it == models.end() ? trial.claimed_speaker
                                           : trial.test_utt)
              << ")");
      continue;
    }
    auto rep_it = reps.find(trial.test_utt);
    if (rep_it == reps.end())
      rep_it = reps.emplace(trial.test_utt,
                            NetworkRep(net, params, feat_it->second)).first;
    const Matrix& rep = rep_it->second;

    ScoreRecord rec;
    rec.trial_id = trial.trial_id;
    rec.target = trial.target;
    rec.raw = CosineScore(rep, model_it->second.vec);
    if (cohort != nullptr) {
      auto st = tnorm_stats.find(trial.test_utt);
      if (st == tnorm_stats.end())
        st = tnorm_stats.emplace(trial.test_utt, CohortStats(rep, *cohort))
                 .first;
      rec.has_tnorm = true;
      rec.tnorm = (rec.raw - st->second.first) / st->second.second;
    }
    report.records.push_back(std::move(rec));
  }
  if (report.records.empty())
    throw ContractError("Evaluate: every trial was skipped");
  report.n_trials = static_cast<int>(report.records.size());

  std::vector<double> t_raw, n_raw, t_norm, n_norm;
  for (const ScoreRecord& r : report.records) {
    (r.target ? t_raw : n_raw).push_back(r.raw);
    if (r.has_tnorm) (r.target ? t_norm : n_norm).push_back(r.tnorm);
  }
  EerResult raw = ComputeEer(t_raw, n_raw);
  report.eer_raw = raw.eer;
  report.threshold = raw.threshold;
  if (report.has_tnorm) report.eer_tnorm = ComputeEer(t_norm, n_norm).eer;
  return report;
}

std::vector<TrialEntry> MakeAllPairTrials(
    const std::vector<std::pair<std::string, std::string>>& test_utts,
    const std::vector<std::string>& speakers) {
  std::vector<TrialEntry> trials;
  trials.reserve(test_utts.size() * speakers.size());
  int n = 0;
  for (const auto& [utt, spk] : test_utts) {
    for (const std::string& claim : speakers) {
      TrialEntry t;
      char buf[16];
      std::snprintf(buf, sizeof(buf), "t%06d", n++);
      t.trial_id = buf;
      t.test_utt = utt;
      t.claimed_speaker = claim;
      t.target = claim == spk;
      trials.push_back(std::move(t));
    }
  }
  return trials;
}

std::string FormatSummary(const EvalReport& report) {
  char buf[64];
  std::string out;
  std::snprintf(buf, sizeof(buf), "eer_raw=%.6f\n", report.eer_raw);
  out += buf;
  if (report.has_tnorm) {
    std::snprintf(buf, sizeof(buf), "eer_tnorm=%.6f\n", report.eer_tnorm);
    out += buf;
  } else {
    out += "eer_tnorm=-\n";
  }
  std::snprintf(buf, sizeof(buf), "threshold=%.9f\n", report.threshold);
  out += buf;
  std::snprintf(buf, sizeof(buf), "n_trials=%d\n", report.n_trials);
  out += buf;
  return out;
}

void DetWrite(const std::string& path, const EvalReport& report) {
  std::vector<double> targets, nontargets;
  for (const ScoreRecord& r : report.records)
    (r.target ? targets : nontargets).push_back(r.raw);
  std::string out = "far\tfrr\n";
  for (const auto& [far, frr] : DetPoints(targets, nontargets)) {
    out += FormatScore(far);
    out += '\t';
    out += FormatScore(frr);
    out += '\n';
  }
  WriteFileBytes(path, out);
}

}  // namespace sv
