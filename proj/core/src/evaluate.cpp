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

#include "seqtouch/evaluate.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace seqtouch {

std::string EvalReport::to_json_text() const {
  nlohmann::json j;
  j["trials"] = trials;
  j["successes"] = successes;
  j["success_rate"] = success_rate;
  j["interactions"] = interactions;
  j["episodes"] = nlohmann::json::array();
  for (const EpisodeResult& e : episodes) {
    nlohmann::json je;
    je["seed"] = e.seed;
    je["template"] = e.template_id;
    je["success"] = e.success;
    je["exploration_steps"] = e.exploration_steps;
    je["skill_steps"] = e.skill_steps;
    j["episodes"].push_back(je);
  }
  return j.dump(2) + "\n";
}

std::string EvalReport::to_csv() const {
  std::ostringstream out;
  out << "seed,template,success,exploration_steps,skill_steps\n";
  for (const EpisodeResult& e : episodes) {
    out << e.seed << "," << e.template_id << "," << (e.success ? 1 : 0) << ","
        << e.exploration_steps << "," << e.skill_steps << "\n";
  }
  return out.str();
}

std::vector<std::uint64_t> eval_seeds(std::uint64_t master, int n) {
  if (n < 0) throw std::invalid_argument("eval_seeds: negative count");
  std::vector<std::uint64_t> seeds(n);
  for (int i = 0; i < n; ++i) {
    seeds[i] = derive_seed(master, 0xE5A0 + static_cast<std::uint64_t>(i));
  }
  return seeds;
}

EvalReport evaluate(const ContactEnv& env, Policy& policy,
                    const std::vector<std::uint64_t>& seeds,
                    int skill_budget) {
  EvalReport report;
  report.trials = static_cast<int>(seeds.size());
  const auto& templates = exploration_templates();
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    WorldState start = env.reset(seeds[i]).first;
    const ExplorationTemplate& tpl = templates[i % templates.size()];
    ExplorationRollout probe = run_exploration(env, start, tpl);
    SkillPlan plan = policy.generate(probe.traj);
    PlanExecution ex = execute_plan(env, probe.state, plan, skill_budget);

    EpisodeResult r;
    r.seed = seeds[i];
    r.template_id = tpl.id;
    r.success = ex.success;
    r.exploration_steps = static_cast<int>(tpl.actions.size());
    r.skill_steps = ex.steps_used;
    report.episodes.push_back(r);
    report.interactions += r.exploration_steps + r.skill_steps;
    if (ex.success) ++report.successes;
  }
  report.success_rate =
      report.trials > 0
          ? static_cast<double>(report.successes) / report.trials
          : 0.0;
  return report;
}

std::vector<AblationPoint> demo_ablation(
    const ContactEnv& env, const ModelConfig& cfg,
    const std::vector<DemoRecord>& pool, const std::vector<int>& counts,
    const FineTuneConfig& ft, const std::vector<std::uint64_t>& seeds,
    std::uint64_t seed, int skill_budget) {
  std::vector<AblationPoint> out;
  for (int count : counts) {
    if (count < 1 || count > static_cast<int>(pool.size())) {
      throw std::invalid_argument("demo_ablation: pool has " +
                                  std::to_string(pool.size()) +
                                  " records, need " + std::to_string(count));
    }
    std::vector<DemoRecord> subset(pool.begin(), pool.begin() + count);
    auto policy = train_policy(
        cfg, subset, ft, derive_seed(seed, static_cast<std::uint64_t>(count)));
    AblationPoint point;
    point.demo_count = count;
    point.report = evaluate(env, *policy, seeds, skill_budget);
    out.push_back(std::move(point));
  }
  return out;
}

std::vector<VariantResult> compare_variants(
    const ContactEnv& env,
    const std::vector<std::pair<std::string, ModelConfig>>& variants,
    const std::vector<DemoRecord>& demos, const FineTuneConfig& ft,
    const std::vector<std::uint64_t>& seeds, std::uint64_t seed,
    int skill_budget) {
  std::vector<VariantResult> out;
  for (std::size_t i = 0; i < variants.size(); ++i) {
    auto policy = train_policy(variants[i].second, demos, ft,
                               derive_seed(seed, 0xB000 + i));
    VariantResult r;
    r.name = variants[i].first;
    r.report = evaluate(env, *policy, seeds, skill_budget);
    out.push_back(std::move(r));
  }
  return out;
}

std::string EstimationCurve::to_json_text() const {
  nlohmann::json j;
  j["episodes"] = episodes;
  j["mean_sq_err"] = mean_sq_err;
  j["counts"] = counts;
  j["early_mse"] = early_mse;
  j["late_mse"] = late_mse;
  j["ratio"] = ratio;
  j["unsupervised_warning"] = unsupervised_warning;
  return j.dump(2) + "\n";
}

EstimationCurve state_estimation_curve(const ContactEnv& env, Policy& policy,
                                       int episodes, std::uint64_t seed) {
  if (episodes < 1) {
    throw std::invalid_argument("state_estimation_curve: need episodes >= 1");
  }
  EstimationCurve curve;
  curve.episodes = episodes;
  curve.unsupervised_warning = !policy.config().latent_supervised;
  const auto& templates = exploration_templates();
  double early_sum = 0.0;
  double late_sum = 0.0;
  for (int i = 0; i < episodes; ++i) {
    std::uint64_t episode_seed =
        derive_seed(seed, 0xC000 + static_cast<std::uint64_t>(i));
    WorldState start = env.reset(episode_seed).first;
    const ExplorationTemplate& tpl = templates[i % templates.size()];
    ExplorationRollout probe = run_exploration(env, start, tpl);
    auto latents = policy.prefix_latents(probe.traj);
    auto target = normalize_hidden(start.hidden, policy.config());

    const int steps = static_cast<int>(latents.size());
    if (static_cast<int>(curve.mean_sq_err.size()) < steps) {
      curve.mean_sq_err.resize(steps, 0.0);
      curve.counts.resize(steps, 0);
    }
    double early = 0.0;
    double late = 0.0;
    const int late_step = std::min(4, steps);
    for (int t = 0; t < steps; ++t) {
      double err = 0.0;
      for (int d = 0; d < 3; ++d) {
        const double diff = latents[t][d] - target[d];
        err += diff * diff;
      }
      curve.mean_sq_err[t] += err;
      curve.counts[t] += 1;
      if (t == 0) early = err;
      if (t == late_step - 1) late = err;
    }
    early_sum += early;
    late_sum += late;
  }
  for (std::size_t t = 0; t < curve.mean_sq_err.size(); ++t) {
    if (curve.counts[t] > 0) curve.mean_sq_err[t] /= curve.counts[t];
  }
  curve.early_mse = early_sum / episodes;
  curve.late_mse = late_sum / episodes;
  curve.ratio = curve.early_mse > 0.0 ? curve.late_mse / curve.early_mse : 0.0;
  return curve;
}

std::string SampleEfficiencyReport::to_json_text() const {
  nlohmann::json j;
  j["total_interactions"] = total_interactions;
  j["rows"] = nlohmann::json::array();
  for (const SampleEfficiencyRow& r : rows) {
    nlohmann::json jr;
    jr["episode"] = r.episode;
    jr["interactions"] = r.interactions;
    jr["running_success_rate"] = r.running_success_rate;
    j["rows"].push_back(jr);
  }
  return j.dump(2) + "\n";
}

std::string SampleEfficiencyReport::to_csv() const {
  std::ostringstream out;
  out << "episode,interactions,running_success_rate\n";
  for (const SampleEfficiencyRow& r : rows) {
    out << r.episode << "," << r.interactions << ","
        << r.running_success_rate << "\n";
  }
  return out.str();
}

SampleEfficiencyReport sample_efficiency_report(const std::string& log_text) {
  SampleEfficiencyReport report;
  std::istringstream in(log_text);
  std::string line;
  int line_no = 0;
  int successes = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw std::runtime_error("run log line " + std::to_string(line_no) +
                               ": " + e.what());
    }
    if (j.contains("summary")) continue;
    if (!j.contains("episode") || !j.contains("interactions") ||
        !j.contains("success")) {
      throw std::runtime_error("run log line " + std::to_string(line_no) +
                               ": missing episode fields");
    }
    SampleEfficiencyRow row;
    row.episode = j["episode"].get<int>();
    row.interactions = j["interactions"].get<long long>();
    if (j["success"].get<bool>()) ++successes;
    row.running_success_rate =
        static_cast<double>(successes) / (row.episode + 1);
    report.rows.push_back(row);
    report.total_interactions = row.interactions;
  }
  return report;
}

}  // namespace seqtouch
