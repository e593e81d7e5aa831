// Copyright 2026 The seqtouch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SEQTOUCH_DATASET_HPP_
#define SEQTOUCH_DATASET_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "seqtouch/trajectory.hpp"

namespace seqtouch {

enum class DemoSource {
  kExpert,  // exploration and plan both scripted
  kRobot,   // exploration executed during the incremental loop
};

// One demonstration: an exploration rollout paired with the plan the expert
// labels for the rail pose that rollout revealed.
struct DemoRecord {
  std::uint64_t seed = 0;       // episode seed (hidden pose + noise stream)
  HiddenState hidden;           // true rail pose, stored for supervision
  DemoSource source = DemoSource::kExpert;
  int template_id = 0;
  ExplorationTrajectory exploration;
  SkillPlan skill;
};

// JSONL with a fixed header line; numbers survive a round trip exactly.
void save_dataset(const std::string& path, const std::vector<DemoRecord>& demos);
std::vector<DemoRecord> load_dataset(const std::string& path);

}  // namespace seqtouch

#endif  // SEQTOUCH_DATASET_HPP_
