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

#include "seqtouch/dagger.hpp"

#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace seqtouch {

void fine_tune(Policy& policy, const std::vector<DemoRecord>& demos,
               const FineTuneConfig& cfg, Rng& rng) {
  if (demos.empty()) {
    throw std::invalid_argument("fine_tune: empty dataset");
  }
  if (cfg.epochs < 0) {
    throw std::invalid_argument("fine_tune: negative epochs");
  }
  if (cfg.epochs == 0) return;
  ad::Adam opt(policy.params(), cfg.adam);
  std::vector<int> order(demos.size());
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    for (int idx : order) {
      ad::Tape tape;
      ad::Tensor loss = policy.demo_loss(tape, demos[idx]);
      policy.params().zero_grad();
      tape.backward(loss);
      opt.step();
    }
  }
}

std::unique_ptr<Policy> train_policy(const ModelConfig& cfg,
                                     const std::vector<DemoRecord>& demos,
                                     const FineTuneConfig& ft,
                                     std::uint64_t seed) {
  auto policy = make_policy(cfg, seed);
  Rng rng(derive_seed(seed, 2));
  fine_tune(*policy, demos, ft, rng);
  return policy;
}

namespace {

std::string episode_line(int episode, int template_id, bool success,
                         int consecutive, bool corrected,
                         long long interactions, int dataset_size) {
  nlohmann::json j;
  j["episode"] = episode;
  j["template"] = template_id;
  j["success"] = success;
  j["consecutive"] = consecutive;
  j["corrected"] = corrected;
  j["interactions"] = interactions;
  j["dataset_size"] = dataset_size;
  return j.dump();
}

}  // namespace

DaggerResult dagger_run(const ContactEnv& env, Policy& policy,
                        const std::vector<DemoRecord>& demos,
                        const DaggerConfig& cfg, std::uint64_t master_seed,
                        const std::string& log_path) {
  if (cfg.budget < 1) {
    throw std::invalid_argument("dagger_run: budget must be positive");
  }
  if (cfg.stop_consecutive < 1) {
    throw std::invalid_argument("dagger_run: stop_consecutive must be positive");
  }
  DaggerResult result;
  result.dataset = demos;

  std::ostringstream log;
  FineTuneConfig ft;
  ft.epochs = cfg.ft_epochs;
  ft.adam = cfg.adam;
  Rng ft_rng(derive_seed(master_seed, 3));

  int consecutive = 0;
  for (int i = 0; i < cfg.budget; ++i) {
    if (consecutive >= cfg.stop_consecutive) {
      result.converged = true;
      break;
    }
    std::uint64_t episode_seed = derive_seed(master_seed, 100 + i);
    WorldState start = env.reset(episode_seed).first;

    int template_id = i % static_cast<int>(exploration_templates().size());
    Rng jitter(derive_seed(master_seed, 0xA000 + i));
    ExplorationTemplate tpl =
        jittered_template(exploration_templates()[template_id], jitter);

    ExplorationRollout probe = run_exploration(env, start, tpl);
    result.interactions += static_cast<long long>(tpl.actions.size());

    SkillPlan plan = policy.generate(probe.traj);
    PlanExecution attempt =
        execute_plan(env, probe.state, plan, cfg.skill_budget);
    result.interactions += attempt.steps_used;
    ++result.episodes;

    bool corrected = false;
    if (attempt.success) {
      ++result.successes;
      ++consecutive;
    } else {
      consecutive = 0;
      corrected = true;
      // Expert takes over from wherever the policy left the arm.
      SkillPlan expert = oracle_skill(start.hidden);
      PlanExecution fix =
          execute_plan(env, attempt.state, expert, cfg.skill_budget);
      result.interactions += fix.steps_used;
      DemoRecord record;
      record.seed = episode_seed;
      record.hidden = start.hidden;
      record.source = DemoSource::kRobot;
      record.template_id = template_id;
      record.exploration = probe.traj;
      record.skill = expert;
      result.dataset.push_back(record);
      ++result.corrections;
      fine_tune(policy, result.dataset, ft, ft_rng);
    }
    log << episode_line(result.episodes - 1, template_id, attempt.success,
                        consecutive, corrected, result.interactions,
                        static_cast<int>(result.dataset.size()))
        << "\n";
  }
  if (!result.converged && consecutive >= cfg.stop_consecutive) {
    result.converged = true;
  }

  nlohmann::json summary;
  summary["summary"] = true;
  summary["episodes"] = result.episodes;
  summary["successes"] = result.successes;
  summary["corrections"] = result.corrections;
  summary["interactions"] = result.interactions;
  summary["converged"] = result.converged;
  log << summary.dump() << "\n";

  if (!log_path.empty()) {
    std::ofstream out(log_path, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("dagger_run: cannot write " + log_path);
    }
    out << log.str();
  }
  return result;
}

}  // namespace seqtouch
