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

#ifndef SV_COMMON_H_
#define SV_COMMON_H_

#include <iostream>
#include <stdexcept>
#include <string>

namespace sv {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes do not conform.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A caller violated a documented precondition.
class ContractError : public Error {
 public:
  using Error::Error;
};

// Invalid or inconsistent configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Input is numerically degenerate (zero norm, zero variance, ...).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

// The trial sampler cannot satisfy its invariants with the data it has.
class SamplingError : public Error {
 public:
  using Error::Error;
};

// File or stream level failure.
class IoError : public Error {
 public:
  using Error::Error;
};

// Training produced a non-finite loss.
class TrainingDivergedError : public Error {
 public:
  TrainingDivergedError(const std::string& what, int last_good_step)
      : Error(what), last_good_step_(last_good_step) {}
  int last_good_step() const { return last_good_step_; }

 private:
  int last_good_step_;
};

}  // namespace sv

#define SV_WARN(msg)                                 \
  do {                                               \
    std::cerr << "WARNING (svkit): " << msg << "\n"; \
  } while (0)

#define SV_LOG(msg)                              \
  do {                                           \
    std::cerr << "LOG (svkit): " << msg << "\n"; \
  } while (0)

#endif  // SV_COMMON_H_
