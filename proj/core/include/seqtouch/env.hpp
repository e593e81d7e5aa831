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

#ifndef SEQTOUCH_ENV_HPP_
#define SEQTOUCH_ENV_HPP_

#include <array>
#include <cstdint>
#include <utility>

#include "seqtouch/env_config.hpp"
#include "seqtouch/trajectory.hpp"

namespace seqtouch {

// Per-step command limits enforced by the simulator and shared by every
// policy and expert.
inline constexpr double kActionClipXY = 0.01;   // m
inline constexpr double kActionClipPhi = 0.05;  // rad

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

// Axis-aligned solid block in the rail frame. Blocks may overlap; the
// obstacle is their union.
struct Rect {
  double u0, u1;  // x extent
  double v0, v1;  // y extent
};

// Full simulator state. Pure-functional stepping: step() consumes a state and
// returns the successor, so branching (expert takeover, replay) is free.
struct WorldState {
  HiddenState hidden;      // rail pose, never observable directly
  Pose ee_pose;            // physical end-effector pose, world frame
  Vec2 ee_anchor;          // constrained tip position, rail frame; the next
                           // command is applied here so compliant yield does
                           // not accumulate across steps and points snapped
                           // onto a face stay exactly on it
  Twist ee_velocity;       // physical velocity over the last step
  bool latched = false;    // sticky: set once the tip has reached the latch
  int step_index = 0;      // counts step() calls since reset
  std::uint64_t noise_seed = 0;  // root of the observation noise stream
};

// Rotate/translate between world coordinates and the rail frame.
Vec2 world_to_target(const Vec2& p, const HiddenState& e);
Vec2 target_to_world(const Vec2& q, const HiddenState& e);

// Reaction force of one engaged contact plane, rail frame. `dp` is the
// commanded setpoint minus the constrained contact point and `n` the unit
// outward normal; only the component pressing into the plane produces force.
Vec2 contact_force(const Vec2& dp, const Vec2& n, const EnvConfig& cfg);

// Planar compliant-contact simulator around a rigid L-rail with a latch
// notch. The end-effector tip is a point driven by a stiffness-limited
// position controller; commands that would penetrate the rail are resolved
// by sweeping the commanded motion against the block union, sliding along
// the first contact plane, and letting the controller yield into the surface
// by overshoot * k_ctrl / (k_env + k_ctrl).
class ContactEnv {
 public:
  explicit ContactEnv(EnvConfig cfg);

  // Draws a hidden rail pose from the randomization box (or the origin pose
  // when randomize is false). The returned observation has an exactly zero
  // wrench: the start pose is free space for every legal rail pose.
  std::pair<WorldState, Observation> reset(std::uint64_t seed,
                                           bool randomize = true) const;
  // Same, with the rail pose pinned by the caller.
  std::pair<WorldState, Observation> reset_with_hidden(
      std::uint64_t seed, const HiddenState& hidden) const;

  // Applies one clipped incremental command. Throws std::invalid_argument on
  // non-finite action components.
  std::pair<WorldState, Observation> step(const WorldState& state,
                                          const Action& action) const;

  // Sticky success flag (tip entered the latch tolerance at some step).
  bool success(const WorldState& state) const { return state.latched; }
  // Instantaneous tolerance check against the true pose.
  bool within_tolerance(const WorldState& state) const;

  // World-frame latch pose a perfect insertion should reach.
  Pose latch_pose(const HiddenState& hidden) const;

  const EnvConfig& config() const { return cfg_; }

  // Rail geometry, rail frame. Exposed for oracles and plots.
  static const std::array<Rect, 4>& blocks();
  static Vec2 latch_point();

 private:
  EnvConfig cfg_;
};

}  // namespace seqtouch

#endif  // SEQTOUCH_ENV_HPP_
