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

#ifndef SEQTOUCH_DAGGER_HPP_
#define SEQTOUCH_DAGGER_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "seqtouch/adam.hpp"
#include "seqtouch/dataset.hpp"
#include "seqtouch/env.hpp"
#include "seqtouch/experts.hpp"
#include "seqtouch/policy.hpp"

namespace seqtouch {

struct FineTuneConfig {
  int epochs = 50;
  ad::AdamConfig adam;
};

// Per-record gradient steps with a fresh optimizer, records shuffled every
// epoch. epochs == 0 leaves the parameters untouched; an empty dataset
// throws std::invalid_argument.
void fine_tune(Policy& policy, const std::vector<DemoRecord>& demos,
               const FineTuneConfig& cfg, Rng& rng);

// make_policy + fine_tune in one call.
std::unique_ptr<Policy> train_policy(const ModelConfig& cfg,
                                     const std::vector<DemoRecord>& demos,
                                     const FineTuneConfig& ft,
                                     std::uint64_t seed);

struct DaggerConfig {
  int budget = 50;            // maximum attempted episodes
  int stop_consecutive = 10;  // stop once this many succeed in a row
  int skill_budget = kSkillBudget;
  int ft_epochs = 50;         // whole-dataset refit passes per correction
  ad::AdamConfig adam;
};

struct DaggerResult {
  std::vector<DemoRecord> dataset;  // input demos plus corrections
  int episodes = 0;
  int successes = 0;
  int corrections = 0;
  long long interactions = 0;  // simulator steps spent (probe + plans)
  bool converged = false;
};

// Incremental loop: probe, let the policy attempt the insertion, and on
// failure have the expert finish the episode, label it, and refit. The
// convergence check runs at the top, so a policy that never fails performs
// exactly stop_consecutive episodes and adds no records. Throws
// std::invalid_argument when budget < 1. When log_path is non-empty, one
// JSON line per episode (plus a final summary line) is written there;
// reruns with the same inputs produce byte-identical logs.
DaggerResult dagger_run(const ContactEnv& env, Policy& policy,
                        const std::vector<DemoRecord>& demos,
                        const DaggerConfig& cfg, std::uint64_t master_seed,
                        const std::string& log_path = "");

}  // namespace seqtouch

#endif  // SEQTOUCH_DAGGER_HPP_
