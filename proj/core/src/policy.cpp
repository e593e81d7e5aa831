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

#include "seqtouch/policy.hpp"

#include <stdexcept>

#include "seqtouch/checkpoint.hpp"
#include "net_util.hpp"

namespace seqtouch {

std::array<double, 12> normalize_step(const ExplorationStep& step,
                                      const ModelConfig& cfg) {
  const Observation& o = step.obs;
  return {step.action.dx / cfg.scale_act,
          step.action.dy / cfg.scale_act,
          step.action.dphi / cfg.scale_act,
          o.wrench.fx / cfg.scale_wrench,
          o.wrench.fy / cfg.scale_wrench,
          o.wrench.tau / cfg.scale_wrench,
          o.ee_pose.x / cfg.scale_pos,
          o.ee_pose.y / cfg.scale_pos,
          o.ee_pose.phi / cfg.scale_ang,
          o.ee_velocity.vx / cfg.scale_vel,
          o.ee_velocity.vy / cfg.scale_vel,
          o.ee_velocity.omega / cfg.scale_vel};
}

std::array<double, 3> normalize_pose(const Pose& pose, const ModelConfig& cfg) {
  return {pose.x / cfg.scale_pos, pose.y / cfg.scale_pos,
          pose.phi / cfg.scale_ang};
}

Pose denormalize_pose(const std::array<double, 3>& v, const ModelConfig& cfg) {
  return {v[0] * cfg.scale_pos, v[1] * cfg.scale_pos, v[2] * cfg.scale_ang};
}

std::array<double, 3> normalize_hidden(const HiddenState& hidden,
                                       const ModelConfig& cfg) {
  return {hidden.x / cfg.scale_pos, hidden.y / cfg.scale_pos,
          hidden.theta / cfg.scale_ang};
}

ad::Tensor latent_penalty(ad::Tape& tape, const ad::Tensor& z,
                          const std::array<double, 3>& e_norm, double weight) {
  const ad::Tensor e = ad::Tensor::from(
      {1, 3}, {e_norm[0], e_norm[1], e_norm[2]});
  const ad::Tensor diff = tape.sub(z, e);
  return tape.scale(tape.sum_all(tape.mul(diff, diff)), weight);
}

Policy::Policy(const ModelConfig& cfg) : cfg_(cfg) { cfg_.validate(); }

ad::Tensor Policy::demo_loss(ad::Tape& tape, const DemoRecord& demo) {
  const int t = static_cast<int>(demo.exploration.size());
  const int m = static_cast<int>(demo.skill.poses.size());
  if (t < 1 || t > cfg_.max_enc_len) {
    throw std::invalid_argument("demo_loss: exploration length out of range");
  }
  if (m < 1 || m > cfg_.max_dec_len) {
    throw std::invalid_argument("demo_loss: plan length out of range");
  }
  if (demo.skill.valid < 1 || demo.skill.valid > m) {
    throw std::invalid_argument("demo_loss: plan valid count out of range");
  }
  return build_loss(tape, demo);
}

std::array<double, 3> Policy::final_latent(
    const ExplorationTrajectory& exploration) {
  const auto all = prefix_latents(exploration);
  if (all.empty()) throw std::invalid_argument("final_latent: empty history");
  return all.back();
}

void Policy::save(const std::string& path) const {
  ad::save_checkpoint(path, params_);
}

void Policy::load(const std::string& path) {
  ad::restore_checkpoint(path, params_);
}

std::unique_ptr<Policy> make_policy(const ModelConfig& cfg,
                                    std::uint64_t seed) {
  switch (cfg.arch) {
    case ArchKind::kTransformer:
      return make_transformer_policy(cfg, seed);
    case ArchKind::kLstm:
      return make_lstm_policy(cfg, seed);
    case ArchKind::kBcLstm:
      return make_bc_policy(cfg, seed);
  }
  throw std::logic_error("unknown arch");
}

}  // namespace seqtouch
