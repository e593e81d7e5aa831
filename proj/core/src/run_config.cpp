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

#include "seqtouch/run_config.hpp"

#include <filesystem>
#include <stdexcept>

#include "json.hpp"
#include "json_keys.hpp"
#include "seqtouch/io_util.hpp"

namespace seqtouch {

using nlohmann::json;

void RunConfig::validate() const {
  env.validate();
  model.validate();
  if (train_epochs < 0 || ft_epochs < 0) {
    throw std::invalid_argument("run config: negative epoch counts");
  }
  if (budget < 1 || stop_consecutive < 1) {
    throw std::invalid_argument(
        "run config: budget and stop_consecutive must be >= 1");
  }
  if (skill_budget < 1 || episodes < 1 || ablation_trials < 1 ||
      estimation_episodes < 1) {
    throw std::invalid_argument("run config: episode counts must be >= 1");
  }
  if (demo_counts.empty()) {
    throw std::invalid_argument("run config: demo_counts must be non-empty");
  }
  for (int c : demo_counts) {
    if (c < 1) {
      throw std::invalid_argument("run config: demo counts must be >= 1");
    }
  }
  if (!(adam.lr > 0.0) || !(adam.beta1 >= 0.0 && adam.beta1 < 1.0) ||
      !(adam.beta2 >= 0.0 && adam.beta2 < 1.0) || !(adam.eps > 0.0)) {
    throw std::invalid_argument("run config: bad optimizer settings");
  }
}

RunConfig RunConfig::from_json_text(const std::string& text) {
  json j = json::parse(text);
  check_keys(j,
             {"seed", "out_dir", "env", "model", "env_config", "model_config",
              "adam", "train_epochs", "budget", "stop_consecutive",
              "ft_epochs", "skill_budget", "episodes", "ablation_trials",
              "demo_counts", "estimation_episodes"},
             "run config");
  RunConfig c;
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("out_dir")) c.out_dir = j["out_dir"].get<std::string>();
  if (j.contains("env") && j.contains("env_config")) {
    throw std::invalid_argument(
        "run config: give either 'env' or 'env_config', not both");
  }
  if (j.contains("model") && j.contains("model_config")) {
    throw std::invalid_argument(
        "run config: give either 'model' or 'model_config', not both");
  }
  if (j.contains("env")) c.env = EnvConfig::from_json_text(j["env"].dump());
  if (j.contains("env_config")) {
    c.env_config_path = j["env_config"].get<std::string>();
  }
  if (j.contains("model")) {
    c.model = ModelConfig::from_json_text(j["model"].dump());
  }
  if (j.contains("model_config")) {
    c.model_config_path = j["model_config"].get<std::string>();
  }
  if (j.contains("adam")) {
    const auto& a = j["adam"];
    check_keys(a, {"lr", "beta1", "beta2", "eps", "clip_norm"},
               "run config adam");
    if (a.contains("lr")) c.adam.lr = a["lr"].get<double>();
    if (a.contains("beta1")) c.adam.beta1 = a["beta1"].get<double>();
    if (a.contains("beta2")) c.adam.beta2 = a["beta2"].get<double>();
    if (a.contains("eps")) c.adam.eps = a["eps"].get<double>();
    if (a.contains("clip_norm")) c.adam.clip_norm = a["clip_norm"].get<double>();
  }
  if (j.contains("train_epochs")) c.train_epochs = j["train_epochs"].get<int>();
  if (j.contains("budget")) c.budget = j["budget"].get<int>();
  if (j.contains("stop_consecutive")) {
    c.stop_consecutive = j["stop_consecutive"].get<int>();
  }
  if (j.contains("ft_epochs")) c.ft_epochs = j["ft_epochs"].get<int>();
  if (j.contains("skill_budget")) c.skill_budget = j["skill_budget"].get<int>();
  if (j.contains("episodes")) c.episodes = j["episodes"].get<int>();
  if (j.contains("ablation_trials")) {
    c.ablation_trials = j["ablation_trials"].get<int>();
  }
  if (j.contains("demo_counts")) {
    c.demo_counts = j["demo_counts"].get<std::vector<int>>();
  }
  if (j.contains("estimation_episodes")) {
    c.estimation_episodes = j["estimation_episodes"].get<int>();
  }
  return c;
}

std::string RunConfig::to_json_text(int indent) const {
  json j;
  j["seed"] = seed;
  j["out_dir"] = out_dir;
  j["env"] = json::parse(env.to_json_text());
  j["model"] = json::parse(model.to_json_text());
  j["adam"] = {{"lr", adam.lr},
               {"beta1", adam.beta1},
               {"beta2", adam.beta2},
               {"eps", adam.eps},
               {"clip_norm", adam.clip_norm}};
  j["train_epochs"] = train_epochs;
  j["budget"] = budget;
  j["stop_consecutive"] = stop_consecutive;
  j["ft_epochs"] = ft_epochs;
  j["skill_budget"] = skill_budget;
  j["episodes"] = episodes;
  j["ablation_trials"] = ablation_trials;
  j["demo_counts"] = demo_counts;
  j["estimation_episodes"] = estimation_episodes;
  return j.dump(indent) + "\n";
}

RunConfig load_run_config(const std::string& path) {
  RunConfig c = RunConfig::from_json_text(read_text_file(path));
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  if (!c.env_config_path.empty()) {
    const auto p = base / c.env_config_path;
    c.env = EnvConfig::from_json_text(read_text_file(p.string()));
  }
  if (!c.model_config_path.empty()) {
    const auto p = base / c.model_config_path;
    c.model = ModelConfig::from_json_text(read_text_file(p.string()));
  }
  return c;
}

}  // namespace seqtouch
