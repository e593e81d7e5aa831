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

#ifndef SEQTOUCH_ENV_CONFIG_HPP_
#define SEQTOUCH_ENV_CONFIG_HPP_

#include <string>

#include "seqtouch/trajectory.hpp"

namespace seqtouch {

// Simulator configuration. Geometry of the rail itself is compiled in (see
// env.hpp); everything an experiment varies lives here.
struct EnvConfig {
  // Legal half-extent of the hidden pose box (positions, meters) and the
  // extra margin the end-effector may move beyond it.
  double workspace_half = 0.15;
  double ee_margin = 0.05;
  double theta_max = 0.26;

  // Randomization range used by reset(); must fit inside the legal box.
  double hidden_range_x = 0.025;
  double hidden_range_y = 0.008;
  double hidden_range_theta = 0.26;

  // Compliance: environment and controller stiffness (N/m) combine in series;
  // torque_arm (m) maps tangential contact offset to sensed torque.
  double k_env = 600.0;
  double k_ctrl = 300.0;
  double torque_arm = 0.05;

  bool noise_enabled = true;
  double sigma_force = 0.01;   // N, wrench noise while in contact
  double sigma_pose = 1e-4;    // m (and rad) pose observation noise

  double eps_pos = 0.003;      // m, latch success radius
  double eps_ang = 0.03;       // rad, alignment tolerance

  double dt = 0.1;             // s, control period
  // Free space above the deck for every pose in the randomization box, close
  // enough that a descending probe touches within a few steps.
  Pose start_pose{0.0, 0.010, 0.0};

  double k_eff() const { return k_env * k_ctrl / (k_env + k_ctrl); }
  double ee_half() const { return workspace_half + ee_margin; }

  // Throws std::invalid_argument on out-of-contract values.
  void validate() const;

  static EnvConfig from_json_text(const std::string& text);
  std::string to_json_text(int indent = 2) const;
};

}  // namespace seqtouch

#endif  // SEQTOUCH_ENV_CONFIG_HPP_
