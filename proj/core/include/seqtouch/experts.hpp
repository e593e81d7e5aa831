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

#ifndef SEQTOUCH_EXPERTS_HPP_
#define SEQTOUCH_EXPERTS_HPP_

#include <vector>

#include "seqtouch/env.hpp"
#include "seqtouch/rng.hpp"
#include "seqtouch/trajectory.hpp"

namespace seqtouch {

// Low-level step budget for executing a skill plan.
inline constexpr int kSkillBudget = 36;

struct ExplorationTemplate {
  int id = 0;
  std::vector<Action> actions;
};

// The five canonical probing routines (lengths 40, 36, 32, 28, 24). Every
// one starts with a four-step descent at the start column, so the first
// press lands within four steps for any rail pose in the randomization box.
const std::vector<ExplorationTemplate>& exploration_templates();

// Copy of tpl with every sideways step's dx jittered by up to +/-2 mm
// (commands stay inside the clip limits; vertical steps are untouched).
ExplorationTemplate jittered_template(const ExplorationTemplate& tpl,
                                      Rng& rng);

// n template instances cycling through the canonical set, each jittered.
std::vector<ExplorationTemplate> sampled_templates(int n, Rng& rng);

struct ExplorationRollout {
  WorldState state;
  ExplorationTrajectory traj;
};

ExplorationRollout run_exploration(const ContactEnv& env,
                                   const WorldState& start,
                                   const ExplorationTemplate& tpl);

// Analytic insertion plan for a known rail pose: twelve via points walking
// down the latch column, all aligned to the rail angle.
SkillPlan oracle_skill(const HiddenState& hidden);

struct PlanExecution {
  WorldState state;
  int steps_used = 0;
  bool success = false;
};

// Walks the plan's valid via points with the clipped incremental controller
// (position tolerance 2 mm, angle tolerance 0.01 rad, at most 8 steps per
// via point). Stops early on latch or when the budget runs out.
PlanExecution execute_plan(const ContactEnv& env, const WorldState& start,
                           const SkillPlan& plan, int budget);

}  // namespace seqtouch

#endif  // SEQTOUCH_EXPERTS_HPP_
