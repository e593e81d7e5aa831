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

#ifndef SEQTOUCH_POLICY_HPP_
#define SEQTOUCH_POLICY_HPP_

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "seqtouch/dataset.hpp"
#include "seqtouch/model_config.hpp"
#include "seqtouch/params.hpp"
#include "seqtouch/tape.hpp"

namespace seqtouch {

// Network-side views of simulator quantities. Inputs and outputs are divided
// by the config scales so everything the nets see is roughly unit range.
std::array<double, 12> normalize_step(const ExplorationStep& step,
                                      const ModelConfig& cfg);
std::array<double, 3> normalize_pose(const Pose& pose, const ModelConfig& cfg);
Pose denormalize_pose(const std::array<double, 3>& v, const ModelConfig& cfg);
std::array<double, 3> normalize_hidden(const HiddenState& hidden,
                                       const ModelConfig& cfg);

// weight * |z - e|^2, the supervision pulling the bottleneck toward the
// normalized hidden pose.
ad::Tensor latent_penalty(ad::Tape& tape, const ad::Tensor& z,
                          const std::array<double, 3>& e_norm, double weight);

// A via-point policy: encodes an exploration history and decodes a skill
// plan one mixture at a time.
class Policy {
 public:
  virtual ~Policy() = default;

  const ModelConfig& config() const { return cfg_; }
  ad::ParamStore& params() { return params_; }
  const ad::ParamStore& params() const { return params_; }

  // Teacher-forcing loss of one demonstration: mean via-point negative
  // log-likelihood, plus the latent term when the config enables it.
  // Throws std::invalid_argument on malformed demos.
  ad::Tensor demo_loss(ad::Tape& tape, const DemoRecord& demo);

  // Per-prefix latent estimates, one per exploration step. Architectures
  // without a bottleneck throw std::logic_error.
  virtual std::vector<std::array<double, 3>> prefix_latents(
      const ExplorationTrajectory& exploration) = 0;
  std::array<double, 3> final_latent(const ExplorationTrajectory& exploration);

  // Deterministic autoregressive decoding (per-step mixture mode).
  virtual SkillPlan generate(const ExplorationTrajectory& exploration) = 0;

  void save(const std::string& path) const;
  void load(const std::string& path);

 protected:
  explicit Policy(const ModelConfig& cfg);

  virtual ad::Tensor build_loss(ad::Tape& tape, const DemoRecord& demo) = 0;

  ModelConfig cfg_;
  ad::ParamStore params_;
};

// Builds the architecture selected by cfg.arch with seeded initialization.
std::unique_ptr<Policy> make_policy(const ModelConfig& cfg, std::uint64_t seed);

}  // namespace seqtouch

#endif  // SEQTOUCH_POLICY_HPP_
