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

#include "seqtouch/experts.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace seqtouch {
namespace {

constexpr double kViaTolPos = 0.002;
constexpr double kViaTolAng = 0.01;
constexpr int kViaStepCap = 8;
constexpr double kPi = 3.14159265358979323846;

void repeat(std::vector<Action>& v, int n, const Action& a) {
  for (int i = 0; i < n; ++i) v.push_back(a);
}

// Probing building blocks. Sideways sweeps keep pressing down so the tip
// rides the deck and drops into the notch instead of skipping over it.
// Rightward sweeps always end pinned against the notch's right corner or the
// ridge, so their length is free; leftward sweeps on the open deck are kept
// to five steps so no start pose can walk the tip off the rail's left end.
std::vector<ExplorationTemplate> build_templates() {
  const Action down{0.0, -0.01, 0.0};
  const Action right{0.01, -0.01, 0.0};   // slide right while pressing
  const Action left{-0.01, -0.01, 0.0};   // slide left while pressing
  const Action lift{-0.01, 0.01, 0.0};    // disengage up and left
  const Action up{0.0, 0.01, 0.0};

  std::vector<ExplorationTemplate> ts(5);
  // Long two-way sweep with an extra press at the right stop; ends hovering.
  ts[0].id = 0;
  repeat(ts[0].actions, 4, down);
  repeat(ts[0].actions, 10, right);
  repeat(ts[0].actions, 2, down);
  repeat(ts[0].actions, 5, left);
  repeat(ts[0].actions, 10, right);
  repeat(ts[0].actions, 5, left);
  repeat(ts[0].actions, 4, lift);

  // Left feint first, then sweep right across the notch; lift straight up.
  ts[1].id = 1;
  repeat(ts[1].actions, 4, down);
  repeat(ts[1].actions, 5, left);
  repeat(ts[1].actions, 18, right);
  repeat(ts[1].actions, 5, left);
  repeat(ts[1].actions, 4, up);

  // Out to the right stop, press there, then back; ends pinned in the notch.
  ts[2].id = 2;
  repeat(ts[2].actions, 4, down);
  repeat(ts[2].actions, 12, right);
  repeat(ts[2].actions, 4, down);
  repeat(ts[2].actions, 12, left);

  // Zigzag across the notch; ends pressing.
  ts[3].id = 3;
  repeat(ts[3].actions, 4, down);
  repeat(ts[3].actions, 6, right);
  repeat(ts[3].actions, 5, left);
  repeat(ts[3].actions, 6, right);
  repeat(ts[3].actions, 5, left);
  repeat(ts[3].actions, 2, down);

  // Minimal: descend, sweep right, nudge back, disengage.
  ts[4].id = 4;
  repeat(ts[4].actions, 4, down);
  repeat(ts[4].actions, 13, right);
  repeat(ts[4].actions, 3, left);
  repeat(ts[4].actions, 4, lift);
  return ts;
}

}  // namespace

const std::vector<ExplorationTemplate>& exploration_templates() {
  static const std::vector<ExplorationTemplate> ts = build_templates();
  return ts;
}

ExplorationTemplate jittered_template(const ExplorationTemplate& tpl,
                                      Rng& rng) {
  ExplorationTemplate t = tpl;
  for (Action& a : t.actions) {
    if (a.dx == 0.0) continue;  // keep descents and lifts vertical
    a.dx = std::clamp(a.dx + rng.uniform(-0.002, 0.002), -kActionClipXY,
                      kActionClipXY);
  }
  return t;
}

std::vector<ExplorationTemplate> sampled_templates(int n, Rng& rng) {
  if (n < 0) throw std::invalid_argument("sampled_templates: negative count");
  const auto& base = exploration_templates();
  std::vector<ExplorationTemplate> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    out.push_back(jittered_template(base[i % base.size()], rng));
  }
  return out;
}

ExplorationRollout run_exploration(const ContactEnv& env,
                                   const WorldState& start,
                                   const ExplorationTemplate& tpl) {
  ExplorationRollout r;
  r.state = start;
  r.traj.reserve(tpl.actions.size());
  for (const Action& a : tpl.actions) {
    auto [ns, obs] = env.step(r.state, a);
    r.state = ns;
    r.traj.push_back({a, obs});
  }
  return r;
}

SkillPlan oracle_skill(const HiddenState& hidden) {
  // Latch column in the rail frame: approach from above, thread the notch
  // mouth, stop 0.5 mm above the latch point.
  static constexpr double kViaV[12] = {0.014,  0.010,   0.006,   0.002,
                                       -0.002, -0.006,  -0.009,  -0.011,
                                       -0.0125, -0.0135, -0.0145, -0.0145};
  const Vec2 latch = ContactEnv::latch_point();
  SkillPlan plan;
  plan.poses.reserve(12);
  for (double v : kViaV) {
    const Vec2 w = target_to_world({latch.x, v}, hidden);
    plan.poses.push_back({w.x, w.y, hidden.theta});
  }
  plan.valid = 12;
  return plan;
}

PlanExecution execute_plan(const ContactEnv& env, const WorldState& start,
                           const SkillPlan& plan, int budget) {
  if (plan.valid < 0 || plan.valid > static_cast<int>(plan.poses.size())) {
    throw std::invalid_argument("execute_plan: bad valid count");
  }
  PlanExecution ex;
  ex.state = start;
  for (int i = 0; i < plan.valid && !ex.state.latched; ++i) {
    const Pose& via = plan.poses[i];
    for (int s = 0; s < kViaStepCap; ++s) {
      const double dx = via.x - ex.state.ee_pose.x;
      const double dy = via.y - ex.state.ee_pose.y;
      const double dphi =
          std::remainder(via.phi - ex.state.ee_pose.phi, 2.0 * kPi);
      if (std::abs(dx) <= kViaTolPos && std::abs(dy) <= kViaTolPos &&
          std::abs(dphi) <= kViaTolAng) {
        break;
      }
      if (ex.steps_used >= budget) {
        ex.success = ex.state.latched;
        return ex;
      }
      const Action a{std::clamp(dx, -kActionClipXY, kActionClipXY),
                     std::clamp(dy, -kActionClipXY, kActionClipXY),
                     std::clamp(dphi, -kActionClipPhi, kActionClipPhi)};
      ex.state = env.step(ex.state, a).first;
      ++ex.steps_used;
      if (ex.state.latched) break;
    }
  }
  ex.success = ex.state.latched;
  return ex;
}

}  // namespace seqtouch
