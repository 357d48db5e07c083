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

#ifndef SV_CHECKPOINT_H_
#define SV_CHECKPOINT_H_

#include <string>
#include <vector>

#include "sv/matrix.h"
#include "sv/network.h"

namespace sv {

enum class HeadKind { kNone = 0, kSoftmax = 1, kE2e = 2 };

// A trained model: network parameters in declaration order, optionally
// followed by head parameters (softmax: W then b; end-to-end: scalar w then
// scalar b).
struct Checkpoint {
  NetConfig net;
  HeadKind head = HeadKind::kNone;
  int n_speakers = 0;  // softmax head rows
  std::vector<Matrix> params;

  // Network parameters only (head stripped).
  std::vector<Matrix> NetParams() const;
};

// File layout: magic "SVMODEL1", u32 net kind, architecture dims (u32 each,
// per kind), u32 head kind (+ u32 speaker count for softmax), then every
// parameter as float32 little-endian in declaration order.
void CheckpointSave(const std::string& path, const Checkpoint& ckpt);
Checkpoint CheckpointLoad(const std::string& path);

// Expected parameter shapes for a checkpoint's net + head combination.
std::vector<std::pair<int, int>> CheckpointShapes(const NetConfig& net,
                                                  HeadKind head,
                                                  int n_speakers);

}  // namespace sv

#endif  // SV_CHECKPOINT_H_
