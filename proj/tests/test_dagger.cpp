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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "seqtouch/dagger.hpp"
#include "seqtouch/io_util.hpp"

namespace seqtouch {
namespace {

ModelConfig tiny_config() {
  ModelConfig cfg;
  cfg.arch = ArchKind::kLstm;
  cfg.d_model = 8;
  cfg.heads = 2;
  cfg.d_ff = 16;
  cfg.mdn_k = 2;
  cfg.max_enc_len = 48;
  cfg.max_dec_len = 12;
  return cfg;
}

DemoRecord synthetic_demo(std::uint64_t salt) {
  Rng rng(derive_seed(4242, salt));
  DemoRecord rec;
  rec.seed = salt;
  rec.hidden = {rng.uniform(-0.02, 0.02), rng.uniform(-0.008, 0.008),
                rng.uniform(-0.2, 0.2)};
  for (int t = 0; t < 6; ++t) {
    ExplorationStep step;
    step.action = {rng.uniform(-0.01, 0.01), -0.01, 0.0};
    step.obs.wrench = {rng.normal(), rng.normal(), 0.0};
    step.obs.ee_pose = {rng.normal() * 0.03, rng.normal() * 0.03, 0.0};
    step.obs.ee_velocity = {rng.normal() * 0.1, rng.normal() * 0.1, 0.0};
    rec.exploration.push_back(step);
  }
  rec.skill.poses.resize(12);
  for (Pose& p : rec.skill.poses) {
    p = {rng.uniform(-0.03, 0.03), rng.uniform(-0.03, 0.03), 0.0};
  }
  rec.skill.valid = 12;
  return rec;
}

bool same_params(const ad::ParamStore& a, const ad::ParamStore& b) {
  if (a.count() != b.count()) return false;
  for (std::size_t i = 0; i < a.count(); ++i) {
    const ad::Tensor& ta = a.tensors()[i];
    const ad::Tensor& tb = b.tensors()[i];
    if (ta.size() != tb.size()) return false;
    for (std::int64_t j = 0; j < ta.size(); ++j) {
      if (ta.at(j) != tb.at(j)) return false;
    }
  }
  return true;
}

// Minimal policy stub with one trainable scalar: generation always returns
// the plan it was built with, and the loss pulls the scalar toward 3.
class FixedPlanPolicy : public Policy {
 public:
  explicit FixedPlanPolicy(SkillPlan plan)
      : Policy(tiny_config()), plan_(std::move(plan)) {
    w_ = params_.add("w", ad::Tensor::scalar(0.0, /*requires_grad=*/true));
  }

  std::vector<std::array<double, 3>> prefix_latents(
      const ExplorationTrajectory& exploration) override {
    return std::vector<std::array<double, 3>>(exploration.size(),
                                              {0.0, 0.0, 0.0});
  }

  SkillPlan generate(const ExplorationTrajectory&) override { return plan_; }

  double weight() const { return w_.item(); }

 protected:
  ad::Tensor build_loss(ad::Tape& tape, const DemoRecord&) override {
    ad::Tensor d = tape.add_scalar(w_, -3.0);
    return tape.sum_all(tape.mul(d, d));
  }

 private:
  SkillPlan plan_;
  ad::Tensor w_;
};

SkillPlan useless_plan() {
  SkillPlan plan;
  plan.poses.assign(12, Pose{0.09, 0.09, 0.0});
  plan.valid = 12;
  return plan;
}

EnvConfig lenient_config() {
  // Success tolerance so wide the start pose already counts as latched:
  // every episode succeeds no matter what the policy outputs.
  EnvConfig cfg;
  cfg.eps_pos = 0.14;
  cfg.eps_ang = 3.0;
  return cfg;
}

std::string temp_log(const std::string& stem) {
  return (std::filesystem::temp_directory_path() /
          ("seqtouch_test_" + stem + ".jsonl"))
      .string();
}

TEST_SUITE_BEGIN("dagger");

TEST_CASE("fine_tune rejects an empty dataset and epochs 0 is the identity") {
  auto policy = make_policy(tiny_config(), 211);
  Rng rng(5);
  FineTuneConfig ft;
  CHECK_THROWS_AS(fine_tune(*policy, {}, ft, rng), std::invalid_argument);

  auto before = make_policy(tiny_config(), 211);
  ft.epochs = 0;
  std::vector<DemoRecord> demos = {synthetic_demo(1)};
  fine_tune(*policy, demos, ft, rng);
  CHECK(same_params(policy->params(), before->params()));

  ft.epochs = 1;
  fine_tune(*policy, demos, ft, rng);
  CHECK_FALSE(same_params(policy->params(), before->params()));
}

TEST_CASE("training is deterministic end to end") {
  std::vector<DemoRecord> demos = {synthetic_demo(1), synthetic_demo(2),
                                   synthetic_demo(3)};
  FineTuneConfig ft;
  ft.epochs = 2;
  auto a = train_policy(tiny_config(), demos, ft, 977);
  auto b = train_policy(tiny_config(), demos, ft, 977);
  CHECK(same_params(a->params(), b->params()));
  auto c = train_policy(tiny_config(), demos, ft, 978);
  CHECK_FALSE(same_params(a->params(), c->params()));
}

TEST_CASE("a policy that always succeeds stops at the streak and adds nothing") {
  ContactEnv env(lenient_config());
  FixedPlanPolicy policy(useless_plan());
  std::vector<DemoRecord> seed_demos = {synthetic_demo(7)};
  DaggerConfig cfg;
  cfg.budget = 50;
  cfg.stop_consecutive = 10;
  cfg.ft_epochs = 1;
  const std::string log = temp_log("converged");
  DaggerResult res = dagger_run(env, policy, seed_demos, cfg, 31337, log);
  CHECK(res.episodes == 10);
  CHECK(res.successes == 10);
  CHECK(res.corrections == 0);
  CHECK(res.converged);
  CHECK(res.dataset.size() == seed_demos.size());
  CHECK(policy.weight() == 0.0);  // no correction, no refit

  const auto lines = read_lines(log);
  REQUIRE(lines.size() == 11);  // 10 episodes + summary
  int consecutive = 0;
  for (int i = 0; i < 10; ++i) {
    const auto j = nlohmann::json::parse(lines[i]);
    CHECK(j.at("episode").get<int>() == i);
    CHECK(j.at("template").get<int>() == i % 5);
    CHECK(j.at("success").get<bool>());
    CHECK_FALSE(j.at("corrected").get<bool>());
    ++consecutive;
    CHECK(j.at("consecutive").get<int>() == consecutive);
  }
  const auto summary = nlohmann::json::parse(lines.back());
  CHECK(summary.at("summary").get<bool>());
  CHECK(summary.at("converged").get<bool>());
  CHECK(summary.at("interactions").get<long long>() == res.interactions);
  std::remove(log.c_str());
}

TEST_CASE("every failed episode yields exactly one replayable correction") {
  ContactEnv env((EnvConfig()));
  FixedPlanPolicy policy(useless_plan());
  DaggerConfig cfg;
  cfg.budget = 6;
  cfg.stop_consecutive = 10;
  cfg.ft_epochs = 1;
  const std::string log = temp_log("corrections");
  DaggerResult res = dagger_run(env, policy, {}, cfg, 4242, log);

  CHECK(res.episodes == 6);
  CHECK(res.successes == 0);
  CHECK(res.corrections == 6);
  CHECK_FALSE(res.converged);
  REQUIRE(res.dataset.size() == 6);
  CHECK(policy.weight() > 0.0);  // refits ran

  const auto& tpls = exploration_templates();
  for (int i = 0; i < 6; ++i) {
    const DemoRecord& rec = res.dataset[i];
    CHECK(rec.source == DemoSource::kRobot);
    CHECK(rec.template_id == i % 5);
    CHECK(rec.exploration.size() == tpls[i % 5].actions.size());

    // The labeled plan is the analytic one for the recorded pose.
    SkillPlan expect = oracle_skill(rec.hidden);
    REQUIRE(rec.skill.valid == expect.valid);
    for (int m = 0; m < expect.valid; ++m) {
      CHECK(rec.skill.poses[m].x == expect.poses[m].x);
      CHECK(rec.skill.poses[m].y == expect.poses[m].y);
    }

    // Stored observations replay exactly from the stored seed and pose.
    auto [ws, obs] = env.reset_with_hidden(rec.seed, rec.hidden);
    WorldState s = ws;
    for (const auto& step : rec.exploration) {
      auto [ns, o] = env.step(s, step.action);
      const auto got = o.flat();
      const auto want = step.obs.flat();
      for (int d = 0; d < kObsDim; ++d) CHECK(got[d] == want[d]);
      s = ns;
    }
  }

  // Interactions cover probe plus attempt plus expert fix for each episode.
  long long floor = 0;
  for (int i = 0; i < 6; ++i) {
    floor += static_cast<long long>(tpls[i % 5].actions.size());
  }
  CHECK(res.interactions > floor);
  std::remove(log.c_str());
}

TEST_CASE("identical seeds replay the whole level loop byte for byte") {
  const std::string log1 = temp_log("replay1");
  const std::string log2 = temp_log("replay2");
  DaggerConfig cfg;
  cfg.budget = 4;
  cfg.stop_consecutive = 10;
  cfg.ft_epochs = 1;

  ContactEnv env((EnvConfig()));
  FixedPlanPolicy p1(useless_plan());
  DaggerResult r1 = dagger_run(env, p1, {}, cfg, 555, log1);
  FixedPlanPolicy p2(useless_plan());
  DaggerResult r2 = dagger_run(env, p2, {}, cfg, 555, log2);

  CHECK(r1.episodes == r2.episodes);
  CHECK(r1.interactions == r2.interactions);
  CHECK(read_text_file(log1) == read_text_file(log2));
  CHECK(p1.weight() == p2.weight());
  REQUIRE(r1.dataset.size() == r2.dataset.size());
  for (std::size_t i = 0; i < r1.dataset.size(); ++i) {
    CHECK(r1.dataset[i].seed == r2.dataset[i].seed);
    CHECK(r1.dataset[i].hidden.x == r2.dataset[i].hidden.x);
  }
  std::remove(log1.c_str());
  std::remove(log2.c_str());
}

TEST_CASE("a non-positive budget is rejected") {
  ContactEnv env((EnvConfig()));
  FixedPlanPolicy policy(useless_plan());
  DaggerConfig cfg;
  cfg.budget = 0;
  CHECK_THROWS_AS(dagger_run(env, policy, {}, cfg, 1), std::invalid_argument);
}

TEST_SUITE_END();

}  // namespace
}  // namespace seqtouch
