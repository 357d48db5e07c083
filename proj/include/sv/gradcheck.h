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

#ifndef SV_GRADCHECK_H_
#define SV_GRADCHECK_H_

#include <functional>
#include <vector>

#include "sv/matrix.h"
#include "sv/tape.h"

namespace sv {

// Builds a scalar loss on a fresh tape from leaves created for each parameter
// matrix, in order. The same builder is called repeatedly with perturbed
// parameter values, so it must be a pure function of them.
using LossBuilder =
    std::function<VarId(Tape& tape, const std::vector<VarId>& params)>;

struct GradCheckOptions {
  double epsilon = 1e-5;
  double threshold = 1e-4;
  // When positive, check at most this many entries per parameter, spread
  // evenly. Zero checks every entry.
  int max_entries_per_param = 0;
};

struct GradCheckResult {
  bool ok = true;
  double max_rel_err = 0.0;
  int entries_checked = 0;
  // Location of the worst entry, for diagnostics.
  int worst_param = -1;
  int worst_entry = -1;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
};

// Central-difference gradient check. The baseline is evaluated twice and must
// reproduce bitwise; a mismatch means the builder is not deterministic and the
// comparison would be meaningless, so it throws ContractError.
GradCheckResult FiniteDifferenceCheck(const LossBuilder& build,
                                      const std::vector<Matrix>& params,
                                      const GradCheckOptions& options = {});

}  // namespace sv

#endif  // SV_GRADCHECK_H_
