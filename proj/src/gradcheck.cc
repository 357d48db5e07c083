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

#include "sv/gradcheck.h"

#include <algorithm>
#include <cmath>

namespace sv {

namespace {

double Evaluate(const LossBuilder& build, const std::vector<Matrix>& params,
                std::vector<Matrix>* grads) {
  Tape tape;
  std::vector<VarId> ids;
  ids.reserve(params.size());
  for (const Matrix& p : params) ids.push_back(tape.Leaf(p));
  VarId loss = build(tape, ids);
  double value = tape.ScalarValue(loss);
  if (grads != nullptr) {
    tape.Backward(loss);
    grads->clear();
    for (VarId id : ids) grads->push_back(tape.Gradient(id));
  }
  return value;
}

}  // namespace

GradCheckResult FiniteDifferenceCheck(const LossBuilder& build,
                                      const std::vector<Matrix>& params,
                                      const GradCheckOptions& options) {
  std::vector<Matrix> analytic;
  double base = Evaluate(build, params, &analytic);
  double base2 = Evaluate(build, params, nullptr);
  if (base != base2)
    throw ContractError(
        "FiniteDifferenceCheck: loss is not deterministic; two evaluations "
        "of the baseline disagree");

  GradCheckResult result;
  std::vector<Matrix> work = params;
  for (size_t p = 0; p < params.size(); ++p) {
    int n = static_cast<int>(params[p].data.size());
    int step = 1;
    if (options.max_entries_per_param > 0 &&
        n > options.max_entries_per_param) {
      step = (n + options.max_entries_per_param - 1) /
             options.max_entries_per_param;
    }
    for (int i = 0; i < n; i += step) {
      double saved = work[p].data[i];
      work[p].data[i] = saved + options.epsilon;
      double up = Evaluate(build, work, nullptr);
      work[p].data[i] = saved - options.epsilon;
      double down = Evaluate(build, work, nullptr);
      work[p].data[i] = saved;

      double numeric = (up - down) / (2.0 * options.epsilon);
      double a = analytic[p].data[i];
      double rel =
          std::abs(a - numeric) / std::max(1e-8, std::abs(a) + std::abs(numeric));
      ++result.entries_checked;
      if (rel > result.max_rel_err) {
        result.max_rel_err = rel;
        result.worst_param = static_cast<int>(p);
        result.worst_entry = i;
        result.worst_analytic = a;
        result.worst_numeric = numeric;
      }
    }
  }
  result.ok = result.max_rel_err <= options.threshold;
  return result;
}

}  // namespace sv
