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

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "seqtouch/experts.hpp"
#include "seqtouch/rng.hpp"

namespace seqtouch {
namespace {

TEST_SUITE_BEGIN("experts");

TEST_CASE("the canonical template set is fixed and clipped") {
  const auto& tpls = exploration_templates();
  REQUIRE(tpls.size() == 5);
  const std::vector<std::size_t> lengths = {40, 36, 32, 28, 24};
  for (std::size_t i = 0; i < tpls.size(); ++i) {
    CHECK(tpls[i].id == static_cast<int>(i));
    CHECK(tpls[i].actions.size() == lengths[i]);
    for (const Action& a : tpls[i].actions) {
      CHECK(std::abs(a.dx) <= kActionClipXY);
      CHECK(std::abs(a.dy) <= kActionClipXY);
      CHECK(std::abs(a.dphi) <= kActionClipPhi);
    }
    // Guaranteed first touch: every routine opens with a four-step descent.
    for (int k = 0; k < 4; ++k) {
      CHECK(tpls[i].actions[k].dx == 0.0);
      CHECK(tpls[i].actions[k].dy == -0.01);
    }
  }
}

TEST_CASE("jitter moves only the sideways component") {
  const auto& tpls = exploration_templates();
  Rng rng(157);
  for (const auto& tpl : tpls) {
    ExplorationTemplate j = jittered_template(tpl, rng);
    CHECK(j.id == tpl.id);
    REQUIRE(j.actions.size() == tpl.actions.size());
    bool changed = false;
    for (std::size_t k = 0; k < j.actions.size(); ++k) {
      CHECK(j.actions[k].dy == tpl.actions[k].dy);
      CHECK(j.actions[k].dphi == tpl.actions[k].dphi);
      CHECK(std::abs(j.actions[k].dx) <= kActionClipXY);
      if (tpl.actions[k].dx == 0.0) {
        CHECK(j.actions[k].dx == 0.0);
      } else {
        CHECK(std::abs(j.actions[k].dx - tpl.actions[k].dx) <= 0.002 + 1e-15);
        changed = changed || j.actions[k].dx != tpl.actions[k].dx;
      }
    }
    CHECK(changed);
  }
}

TEST_CASE("sampling cycles through the canonical routines") {
  Rng rng(163);
  auto batch = sampled_templates(7, rng);
  REQUIRE(batch.size() == 7);
  for (int i = 0; i < 7; ++i) CHECK(batch[i].id == i % 5);
}

TEST_CASE("probing reveals at least two contact directions") {
  ContactEnv env([] {
    EnvConfig cfg;
    cfg.noise_enabled = false;
    return cfg;
  }());
  auto [ws, obs] = env.reset_with_hidden(11, {0.0, 0.0, 0.0});
  auto roll = run_exploration(env, ws, exploration_templates()[0]);
  REQUIRE(roll.traj.size() == 40);
  std::set<std::pair<int, int>> directions;
  for (const auto& step : roll.traj) {
    const double fx = step.obs.wrench.fx;
    const double fy = step.obs.wrench.fy;
    if (fx == 0.0 && fy == 0.0) continue;
    directions.insert({fx > 0.0 ? 1 : (fx < 0.0 ? -1 : 0),
                       fy > 0.0 ? 1 : (fy < 0.0 ? -1 : 0)});
  }
  CHECK(directions.size() >= 2);
}

TEST_CASE("exploration rollouts replay the template against the simulator") {
  ContactEnv env((EnvConfig()));
  auto [ws, obs] = env.reset(167);
  const auto& tpl = exploration_templates()[2];
  auto roll = run_exploration(env, ws, tpl);
  REQUIRE(roll.traj.size() == tpl.actions.size());
  WorldState s = ws;
  for (std::size_t k = 0; k < tpl.actions.size(); ++k) {
    CHECK(roll.traj[k].action.dx == tpl.actions[k].dx);
    auto [ns, o] = env.step(s, tpl.actions[k]);
    const auto a = o.flat();
    const auto b = roll.traj[k].obs.flat();
    for (int i = 0; i < kObsDim; ++i) CHECK(a[i] == b[i]);
    s = ns;
  }
  CHECK(roll.state.step_index == static_cast<int>(tpl.actions.size()));
}

TEST_CASE("the skill plan is the rail-frame ladder for any pose") {
  SkillPlan origin = oracle_skill({0.0, 0.0, 0.0});
  REQUIRE(origin.valid == 12);
  REQUIRE(origin.poses.size() == 12);

  Rng rng(173);
  for (int i = 0; i < 100; ++i) {
    HiddenState e{rng.uniform(-0.025, 0.025), rng.uniform(-0.008, 0.008),
                  rng.uniform(-0.26, 0.26)};
    SkillPlan plan = oracle_skill(e);
    REQUIRE(plan.valid == 12);
    const double c = std::cos(e.theta), s = std::sin(e.theta);
    for (int m = 0; m < plan.valid; ++m) {
      CHECK(plan.poses[m].phi == e.theta);
      // Same via expressed in the rail frame as the origin plan.
      const double ex = e.x + c * origin.poses[m].x - s * origin.poses[m].y;
      const double ey = e.y + s * origin.poses[m].x + c * origin.poses[m].y;
      CHECK(plan.poses[m].x == doctest::Approx(ex).epsilon(1e-12));
      CHECK(plan.poses[m].y == doctest::Approx(ey).epsilon(1e-12));
    }
    // The ladder ends inside the success ball around the latch.
    ContactEnv env((EnvConfig()));
    Pose latch = env.latch_pose(e);
    const Pose& last = plan.poses[plan.valid - 1];
    const double dist = std::hypot(last.x - latch.x, last.y - latch.y);
    CHECK(dist < env.config().eps_pos);
  }
}

TEST_CASE("execute_plan respects budget, tolerance and the latch") {
  ContactEnv env((EnvConfig()));
  auto [ws, obs] = env.reset(179);
  SkillPlan plan = oracle_skill(ws.hidden);

  auto full = execute_plan(env, ws, plan, kSkillBudget);
  CHECK(full.success);
  CHECK(full.steps_used <= kSkillBudget);
  CHECK(env.success(full.state));

  auto none = execute_plan(env, ws, plan, 0);
  CHECK(none.steps_used == 0);
  CHECK_FALSE(none.success);

  SkillPlan empty;
  empty.poses.resize(12);
  empty.valid = 0;
  auto idle = execute_plan(env, ws, empty, kSkillBudget);
  CHECK(idle.steps_used == 0);
}

TEST_CASE("the expert closes its own plans on fresh poses") {
  ContactEnv env((EnvConfig()));
  const auto& tpls = exploration_templates();
  int ok = 0;
  const int n = 200;
  for (int i = 0; i < n; ++i) {
    auto [ws, obs] = env.reset(derive_seed(48151, i));
    auto roll = run_exploration(env, ws, tpls[i % tpls.size()]);
    auto fix = execute_plan(env, roll.state, oracle_skill(ws.hidden),
                            kSkillBudget);
    ok += fix.success ? 1 : 0;
  }
  CHECK(ok >= static_cast<int>(0.95 * n));
}

TEST_SUITE_END();

}  // namespace
}  // namespace seqtouch
