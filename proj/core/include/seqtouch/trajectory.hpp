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

#ifndef SEQTOUCH_TRAJECTORY_HPP_
#define SEQTOUCH_TRAJECTORY_HPP_

#include <array>
#include <cstdint>
#include <vector>

namespace seqtouch {

// Planar pose of the end-effector or a via point: position in meters, heading
// in radians.
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double phi = 0.0;
};

// Per-step displacement command.
struct Action {
  double dx = 0.0;
  double dy = 0.0;
  double dphi = 0.0;
};

struct Wrench {
  double fx = 0.0;
  double fy = 0.0;
  double tau = 0.0;
};

struct Twist {
  double vx = 0.0;
  double vy = 0.0;
  double omega = 0.0;
};

// Target object pose; hidden from the policy, readable only by the oracle and
// the test harness.
struct HiddenState {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
};

inline constexpr int kObsDim = 9;
inline constexpr int kActDim = 3;
inline constexpr int kPoseDim = 3;

struct Observation {
  Wrench wrench;
  Pose ee_pose;
  Twist ee_velocity;

  std::array<double, kObsDim> flat() const {
    return {wrench.fx,     wrench.fy,     wrench.tau,
            ee_pose.x,     ee_pose.y,     ee_pose.phi,
            ee_velocity.vx, ee_velocity.vy, ee_velocity.omega};
  }
};

// One exploration interaction: the executed action and the observation that
// resulted from it.
struct ExplorationStep {
  Action action;
  Observation obs;
};

using ExplorationTrajectory = std::vector<ExplorationStep>;

// Fixed-length via-point plan; entries past `valid` are padding.
struct SkillPlan {
  std::vector<Pose> poses;
  int valid = 0;
};

}  // namespace seqtouch

#endif  // SEQTOUCH_TRAJECTORY_HPP_
