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

#ifndef SEQTOUCH_EVALUATE_HPP_
#define SEQTOUCH_EVALUATE_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "seqtouch/dagger.hpp"
#include "seqtouch/dataset.hpp"
#include "seqtouch/env.hpp"
#include "seqtouch/policy.hpp"

namespace seqtouch {

struct EpisodeResult {
  std::uint64_t seed = 0;
  int template_id = 0;
  bool success = false;
  int exploration_steps = 0;
  int skill_steps = 0;
};

struct EvalReport {
  int trials = 0;
  int successes = 0;
  double success_rate = 0.0;
  long long interactions = 0;
  std::vector<EpisodeResult> episodes;

  std::string to_json_text() const;
  std::string to_csv() const;
};

// Derived episode seeds so different policies can be scored on identical
// start poses.
std::vector<std::uint64_t> eval_seeds(std::uint64_t master, int n);

// One probe-then-insert episode per seed, canonical template i % 5 with no
// jitter. success_rate is successes / trials.
EvalReport evaluate(const ContactEnv& env, Policy& policy,
                    const std::vector<std::uint64_t>& seeds,
                    int skill_budget = kSkillBudget);

struct AblationPoint {
  int demo_count = 0;
  EvalReport report;
};

// Trains a fresh policy on the first `count` records of the pool for each
// entry of counts, scoring every one on the same seeds. Throws
// std::invalid_argument when the pool is smaller than a requested count.
std::vector<AblationPoint> demo_ablation(
    const ContactEnv& env, const ModelConfig& cfg,
    const std::vector<DemoRecord>& pool, const std::vector<int>& counts,
    const FineTuneConfig& ft, const std::vector<std::uint64_t>& seeds,
    std::uint64_t seed, int skill_budget = kSkillBudget);

struct VariantResult {
  std::string name;
  EvalReport report;
};

// Trains one policy per (name, config) pair on the shared demo set and
// scores all of them on the same seeds.
std::vector<VariantResult> compare_variants(
    const ContactEnv& env,
    const std::vector<std::pair<std::string, ModelConfig>>& variants,
    const std::vector<DemoRecord>& demos, const FineTuneConfig& ft,
    const std::vector<std::uint64_t>& seeds, std::uint64_t seed,
    int skill_budget = kSkillBudget);

struct EstimationCurve {
  int episodes = 0;
  // Mean squared bottleneck error against the normalized rail pose, indexed
  // by prefix length - 1. Entries past a template's length only average the
  // longer templates.
  std::vector<double> mean_sq_err;
  std::vector<int> counts;
  double early_mse = 0.0;  // mean error after one step
  double late_mse = 0.0;   // mean error after min(4, T) steps
  double ratio = 0.0;      // late / early
  // Set when the policy was trained without the latent-supervision term;
  // the curve is still computed but is not expected to converge.
  bool unsupervised_warning = false;

  std::string to_json_text() const;
};

// Probes fresh poses and tracks how quickly the latent readout locks onto
// the true rail pose as evidence accumulates.
EstimationCurve state_estimation_curve(const ContactEnv& env, Policy& policy,
                                       int episodes, std::uint64_t seed);

struct SampleEfficiencyRow {
  int episode = 0;
  long long interactions = 0;  // cumulative simulator steps so far
  double running_success_rate = 0.0;
};

struct SampleEfficiencyReport {
  std::vector<SampleEfficiencyRow> rows;
  long long total_interactions = 0;

  std::string to_json_text() const;
  std::string to_csv() const;
};

// Reads the per-episode JSON lines an incremental run wrote and pairs the
// cumulative interaction count with the running success rate. Throws
// std::runtime_error on malformed input.
SampleEfficiencyReport sample_efficiency_report(const std::string& log_text);

}  // namespace seqtouch

#endif  // SEQTOUCH_EVALUATE_HPP_
