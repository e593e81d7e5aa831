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

#include "seqtouch/env_config.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "json_keys.hpp"

namespace seqtouch {

using nlohmann::json;

void EnvConfig::validate() const {
  if (!(k_env > 0.0) || !(k_ctrl > 0.0)) {
    throw std::invalid_argument("env config: stiffness values must be positive");
  }
  if (torque_arm < 0.0) {
    throw std::invalid_argument("env config: torque_arm must be non-negative");
  }
  if (!(dt > 0.0)) throw std::invalid_argument("env config: dt must be positive");
  if (!(eps_pos > 0.0) || !(eps_ang > 0.0)) {
    throw std::invalid_argument("env config: success tolerances must be positive");
  }
  if (sigma_force < 0.0 || sigma_pose < 0.0) {
    throw std::invalid_argument("env config: noise sigmas must be non-negative");
  }
  if (!(workspace_half > 0.0) || ee_margin < 0.0 || !(theta_max > 0.0)) {
    throw std::invalid_argument("env config: bad workspace bounds");
  }
  if (hidden_range_x < 0.0 || hidden_range_x > workspace_half ||
      hidden_range_y < 0.0 || hidden_range_y > workspace_half ||
      hidden_range_theta < 0.0 || hidden_range_theta > theta_max) {
    throw std::invalid_argument(
        "env config: hidden randomization range exceeds the legal box");
  }
  double h = ee_half();
  if (std::abs(start_pose.x) > h || std::abs(start_pose.y) > h) {
    throw std::invalid_argument("env config: start pose outside workspace");
  }
}

EnvConfig EnvConfig::from_json_text(const std::string& text) {
  json j = json::parse(text);
  EnvConfig c;
  check_keys(j, {"workspace", "hidden_range", "stiffness", "noise", "success",
                 "dt", "start_pose"},
             "env config");
  if (j.contains("workspace")) {
    const auto& w = j["workspace"];
    check_keys(w, {"half_extent", "ee_margin", "theta_max"}, "env config workspace");
    if (w.contains("half_extent")) c.workspace_half = w["half_extent"].get<double>();
    if (w.contains("ee_margin")) c.ee_margin = w["ee_margin"].get<double>();
    if (w.contains("theta_max")) c.theta_max = w["theta_max"].get<double>();
  }
  if (j.contains("hidden_range")) {
    const auto& h = j["hidden_range"];
    check_keys(h, {"x", "y", "theta"}, "env config hidden_range");
    if (h.contains("x")) c.hidden_range_x = h["x"].get<double>();
    if (h.contains("y")) c.hidden_range_y = h["y"].get<double>();
    if (h.contains("theta")) c.hidden_range_theta = h["theta"].get<double>();
  }
  if (j.contains("stiffness")) {
    const auto& s = j["stiffness"];
    check_keys(s, {"k_env", "k_ctrl", "torque_arm"}, "env config stiffness");
    if (s.contains("k_env")) c.k_env = s["k_env"].get<double>();
    if (s.contains("k_ctrl")) c.k_ctrl = s["k_ctrl"].get<double>();
    if (s.contains("torque_arm")) c.torque_arm = s["torque_arm"].get<double>();
  }
  if (j.contains("noise")) {
    const auto& n = j["noise"];
    check_keys(n, {"enabled", "sigma_force", "sigma_pose"}, "env config noise");
    if (n.contains("enabled")) c.noise_enabled = n["enabled"].get<bool>();
    if (n.contains("sigma_force")) c.sigma_force = n["sigma_force"].get<double>();
    if (n.contains("sigma_pose")) c.sigma_pose = n["sigma_pose"].get<double>();
  }
  if (j.contains("success")) {
    const auto& s = j["success"];
    check_keys(s, {"eps_pos", "eps_ang"}, "env config success");
    if (s.contains("eps_pos")) c.eps_pos = s["eps_pos"].get<double>();
    if (s.contains("eps_ang")) c.eps_ang = s["eps_ang"].get<double>();
  }
  if (j.contains("dt")) c.dt = j["dt"].get<double>();
  if (j.contains("start_pose")) {
    const auto& p = j["start_pose"];
    if (!p.is_array() || p.size() != 3) {
      throw std::invalid_argument("env config: start_pose must be [x, y, phi]");
    }
    c.start_pose = {p[0].get<double>(), p[1].get<double>(), p[2].get<double>()};
  }
  c.validate();
  return c;
}

std::string EnvConfig::to_json_text(int indent) const {
  json j;
  j["workspace"] = {{"half_extent", workspace_half},
                    {"ee_margin", ee_margin},
                    {"theta_max", theta_max}};
  j["hidden_range"] = {{"x", hidden_range_x},
                       {"y", hidden_range_y},
                       {"theta", hidden_range_theta}};
  j["stiffness"] = {{"k_env", k_env}, {"k_ctrl", k_ctrl}, {"torque_arm", torque_arm}};
  j["noise"] = {{"enabled", noise_enabled},
                {"sigma_force", sigma_force},
                {"sigma_pose", sigma_pose}};
  j["success"] = {{"eps_pos", eps_pos}, {"eps_ang", eps_ang}};
  j["dt"] = dt;
  j["start_pose"] = {start_pose.x, start_pose.y, start_pose.phi};
  return j.dump(indent);
}

}  // namespace seqtouch
