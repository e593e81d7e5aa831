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

#ifndef SEQTOUCH_RUN_CONFIG_HPP_
#define SEQTOUCH_RUN_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "seqtouch/adam.hpp"
#include "seqtouch/env_config.hpp"
#include "seqtouch/model_config.hpp"

namespace seqtouch {

// Experiment-level settings shared by the command-line tools. A config file
// may reference the simulator and model configs by path ("env_config",
// "model_config", resolved relative to the file) or embed them inline
// ("env", "model"); the resolved form persisted into run directories always
// embeds them.
struct RunConfig {
  std::uint64_t seed = 1;
  std::string out_dir = "runs";

  EnvConfig env;
  ModelConfig model;
  ad::AdamConfig adam;

  int train_epochs = 300;
  int budget = 50;            // incremental-run episode cap
  int stop_consecutive = 10;  // stop rule
  int ft_epochs = 50;         // whole-dataset refit passes per correction
  int skill_budget = 36;      // low-level steps per insertion attempt
  int episodes = 100;         // evaluation trials
  int ablation_trials = 45;   // trials per ablation point
  std::vector<int> demo_counts = {5, 10, 25, 50, 100};
  int estimation_episodes = 40;

  void validate() const;

  // Parses the strict JSON form. Path references are kept verbatim here;
  // use load_run_config to also read them in.
  static RunConfig from_json_text(const std::string& text);
  std::string to_json_text(int indent = 2) const;

  // Unresolved path references, if the source file used them.
  std::string env_config_path;
  std::string model_config_path;
};

// Reads a config file and resolves env/model path references relative to
// its directory. Throws std::runtime_error on missing files.
RunConfig load_run_config(const std::string& path);

}  // namespace seqtouch

#endif  // SEQTOUCH_RUN_CONFIG_HPP_
