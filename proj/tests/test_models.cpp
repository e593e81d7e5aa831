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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "seqtouch/policy.hpp"
#include "seqtouch/rng.hpp"

namespace seqtouch {
namespace {

ModelConfig tiny_config(ArchKind arch) {
  ModelConfig cfg;
  cfg.arch = arch;
  cfg.d_model = 8;
  cfg.heads = 2;
  cfg.enc_layers = 2;
  cfg.dec_layers = 2;
  cfg.d_ff = 16;
  cfg.mdn_k = 2;
  cfg.max_enc_len = 8;
  cfg.max_dec_len = 3;
  return cfg;
}

ExplorationTrajectory random_traj(int t, Rng& rng) {
  ExplorationTrajectory traj;
  for (int i = 0; i < t; ++i) {
    ExplorationStep step;
    step.action = {rng.uniform(-0.01, 0.01), rng.uniform(-0.01, 0.01),
                   rng.uniform(-0.05, 0.05)};
    step.obs.wrench = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0),
                       rng.uniform(-0.1, 0.1)};
    step.obs.ee_pose = {rng.uniform(-0.1, 0.1), rng.uniform(-0.1, 0.1),
                        rng.uniform(-0.26, 0.26)};
    step.obs.ee_velocity = {rng.uniform(-0.1, 0.1), rng.uniform(-0.1, 0.1),
                            rng.uniform(-0.5, 0.5)};
    traj.push_back(step);
  }
  return traj;
}

DemoRecord random_demo(int t, int m, int valid, Rng& rng) {
  DemoRecord demo;
  demo.seed = 1234;
  demo.hidden = {rng.uniform(-0.025, 0.025), rng.uniform(-0.008, 0.008),
                 rng.uniform(-0.26, 0.26)};
  demo.exploration = random_traj(t, rng);
  demo.skill.poses.resize(m);
  for (Pose& p : demo.skill.poses) {
    p = {rng.uniform(-0.05, 0.05), rng.uniform(-0.05, 0.05),
         rng.uniform(-0.26, 0.26)};
  }
  demo.skill.valid = valid;
  return demo;
}

bool same_latent(const std::array<double, 3>& a,
                 const std::array<double, 3>& b) {
  return a[0] == b[0] && a[1] == b[1] && a[2] == b[2];
}

bool same_params(const ad::ParamStore& a, const ad::ParamStore& b) {
  if (a.count() != b.count()) return false;
  for (std::size_t i = 0; i < a.count(); ++i) {
    const ad::Tensor& ta = a.tensors()[i];
    const ad::Tensor& tb = b.tensors()[i];
    if (ta.shape() != tb.shape()) return false;
    for (std::int64_t j = 0; j < ta.size(); ++j) {
      if (ta.at(j) != tb.at(j)) return false;
    }
  }
  return true;
}

const std::vector<ArchKind> kAllArchs = {
    ArchKind::kTransformer, ArchKind::kLstm, ArchKind::kBcLstm};

TEST_SUITE_BEGIN("models");

TEST_CASE("normalization scales every channel to unit range") {
  ModelConfig cfg;
  ExplorationStep step;
  step.obs.wrench = {2.0, -1.0, 0.1};
  step.obs.ee_pose = {0.15, -0.075, 0.26};
  step.obs.ee_velocity = {0.1, -0.05, 0.02};
  step.action = {0.01, -0.005, 0.05};
  const auto v = normalize_step(step, cfg);
  // Layout: action / scale_act, wrench / scale_wrench, position / scale_pos,
  // heading / scale_ang, velocity / scale_vel.
  CHECK(v[0] == doctest::Approx(1.0));
  CHECK(v[1] == doctest::Approx(-0.5));
  CHECK(v[2] == doctest::Approx(5.0));
  CHECK(v[3] == doctest::Approx(1.0));
  CHECK(v[4] == doctest::Approx(-0.5));
  CHECK(v[5] == doctest::Approx(0.05));
  CHECK(v[6] == doctest::Approx(1.0));
  CHECK(v[7] == doctest::Approx(-0.5));
  CHECK(v[8] == doctest::Approx(1.0));
  CHECK(v[9] == doctest::Approx(1.0));
  CHECK(v[10] == doctest::Approx(-0.5));
  CHECK(v[11] == doctest::Approx(0.2));
}

TEST_CASE("pose normalization round-trips") {
  ModelConfig cfg;
  Rng rng(107);
  for (int i = 0; i < 200; ++i) {
    Pose p{rng.uniform(-0.1, 0.1), rng.uniform(-0.1, 0.1),
           rng.uniform(-0.26, 0.26)};
    Pose back = denormalize_pose(normalize_pose(p, cfg), cfg);
    CHECK(back.x == doctest::Approx(p.x).epsilon(1e-12));
    CHECK(back.y == doctest::Approx(p.y).epsilon(1e-12));
    CHECK(back.phi == doctest::Approx(p.phi).epsilon(1e-12));
  }
}

TEST_CASE("latent penalty is the weighted squared distance") {
  ad::Tape tape;
  ad::Tensor z = ad::Tensor::zeros({1, 3});
  CHECK(latent_penalty(tape, z, {1.0, 0.0, 0.0}, 1.0).item() == 1.0);
  CHECK(latent_penalty(tape, z, {1.0, -2.0, 2.0}, 0.5).item() ==
        doctest::Approx(4.5).epsilon(1e-15));
}

TEST_CASE("seeded construction is deterministic") {
  for (ArchKind arch : kAllArchs) {
    auto a = make_policy(tiny_config(arch), 42);
    auto b = make_policy(tiny_config(arch), 42);
    auto c = make_policy(tiny_config(arch), 43);
    CHECK(same_params(a->params(), b->params()));
    CHECK_FALSE(same_params(a->params(), c->params()));
  }
}

TEST_CASE("generation is deterministic and well-formed") {
  Rng rng(109);
  const ExplorationTrajectory traj = random_traj(5, rng);
  for (ArchKind arch : kAllArchs) {
    auto policy = make_policy(tiny_config(arch), 7);
    SkillPlan p1 = policy->generate(traj);
    SkillPlan p2 = policy->generate(traj);
    CHECK(p1.valid == 3);
    REQUIRE(p1.poses.size() == 3);
    for (int i = 0; i < 3; ++i) {
      CHECK(p1.poses[i].x == p2.poses[i].x);
      CHECK(p1.poses[i].y == p2.poses[i].y);
      CHECK(p1.poses[i].phi == p2.poses[i].phi);
      CHECK(std::isfinite(p1.poses[i].x));
    }
  }
}

TEST_CASE("prefix latents are causal and agree with shorter histories") {
  Rng rng(113);
  const ExplorationTrajectory traj = random_traj(6, rng);
  for (ArchKind arch : {ArchKind::kTransformer, ArchKind::kLstm}) {
    auto policy = make_policy(tiny_config(arch), 11);
    const auto all = policy->prefix_latents(traj);
    REQUIRE(all.size() == traj.size());
    for (std::size_t t = 0; t < traj.size(); ++t) {
      ExplorationTrajectory prefix(traj.begin(), traj.begin() + t + 1);
      const auto head = policy->prefix_latents(prefix);
      CHECK(same_latent(head.back(), all[t]));
    }
    CHECK(same_latent(policy->final_latent(traj), all.back()));

    // Tampering with a later step must not move an earlier latent.
    ExplorationTrajectory future = traj;
    future[4].obs.wrench.fx += 1.0;
    const auto tampered = policy->prefix_latents(future);
    CHECK(same_latent(tampered[2], all[2]));
    CHECK_FALSE(same_latent(tampered[5], all[5]));
  }
}

TEST_CASE("the single-stream baseline has no latent readout") {
  auto policy = make_policy(tiny_config(ArchKind::kBcLstm), 13);
  Rng rng(127);
  const ExplorationTrajectory traj = random_traj(4, rng);
  CHECK_THROWS_AS(policy->prefix_latents(traj), std::logic_error);
  CHECK_THROWS_AS(policy->final_latent(traj), std::logic_error);
}

TEST_CASE("input order matters") {
  Rng rng(131);
  ExplorationTrajectory traj = random_traj(6, rng);
  for (ArchKind arch : kAllArchs) {
    auto policy = make_policy(tiny_config(arch), 17);
    const SkillPlan before = policy->generate(traj);
    ExplorationTrajectory swapped = traj;
    std::swap(swapped[1], swapped[4]);
    const SkillPlan after = policy->generate(swapped);
    bool moved = false;
    for (int i = 0; i < before.valid; ++i) {
      moved = moved || before.poses[i].x != after.poses[i].x ||
              before.poses[i].y != after.poses[i].y;
    }
    CHECK(moved);
  }
}

TEST_CASE("demo loss is finite and validates its input") {
  Rng rng(137);
  DemoRecord demo = random_demo(5, 3, 3, rng);
  for (ArchKind arch : kAllArchs) {
    auto policy = make_policy(tiny_config(arch), 19);
    ad::Tape tape;
    const double loss = policy->demo_loss(tape, demo).item();
    CHECK(std::isfinite(loss));

    DemoRecord empty = demo;
    empty.exploration.clear();
    ad::Tape t2;
    CHECK_THROWS_AS(policy->demo_loss(t2, empty), std::invalid_argument);

    DemoRecord long_plan = demo;
    long_plan.skill.poses.resize(9);
    ad::Tape t3;
    CHECK_THROWS_AS(policy->demo_loss(t3, long_plan), std::invalid_argument);

    DemoRecord bad_valid = demo;
    bad_valid.skill.valid = 0;
    ad::Tape t4;
    CHECK_THROWS_AS(policy->demo_loss(t4, bad_valid), std::invalid_argument);
  }
}

TEST_CASE("latent supervision adds exactly the penalty term") {
  Rng rng(139);
  DemoRecord demo = random_demo(5, 3, 3, rng);
  ModelConfig plain = tiny_config(ArchKind::kTransformer);
  ModelConfig sup = plain;
  sup.latent_supervised = true;
  sup.latent_weight = 0.75;

  auto p_plain = make_policy(plain, 23);
  auto p_sup = make_policy(sup, 23);
  REQUIRE(same_params(p_plain->params(), p_sup->params()));

  ad::Tape t1;
  const double a = p_plain->demo_loss(t1, demo).item();
  ad::Tape t2;
  const double b = p_sup->demo_loss(t2, demo).item();

  const auto z = p_sup->final_latent(demo.exploration);
  const auto e = normalize_hidden(demo.hidden, sup);
  double pen = 0.0;
  for (int i = 0; i < 3; ++i) pen += (z[i] - e[i]) * (z[i] - e[i]);
  CHECK(b - a == doctest::Approx(0.75 * pen).epsilon(1e-9));
}

TEST_CASE("gradients match finite differences for every architecture") {
  Rng rng(149);
  DemoRecord demo = random_demo(4, 3, 2, rng);
  for (ArchKind arch : kAllArchs) {
    for (bool supervised : {false, true}) {
      if (supervised && arch == ArchKind::kBcLstm) continue;
      ModelConfig cfg = tiny_config(arch);
      cfg.latent_supervised = supervised;
      auto policy = make_policy(cfg, 29);

      ad::Tape tape;
      ad::Tensor loss = policy->demo_loss(tape, demo);
      policy->params().zero_grad();
      tape.backward(loss);

      constexpr double kH = 1e-5;
      double worst = 0.0;
      Rng pick(31);
      for (const ad::Tensor& p : policy->params().tensors()) {
        const int samples =
            p.size() <= 6 ? static_cast<int>(p.size()) : 6;
        for (int s = 0; s < samples; ++s) {
          const std::int64_t i =
              p.size() <= 6 ? s
                            : static_cast<std::int64_t>(pick.next_u64() %
                                                        p.size());
          const double keep = p.data()[i];
          p.data()[i] = keep + kH;
          ad::Tape tp;
          const double fp = policy->demo_loss(tp, demo).item();
          p.data()[i] = keep - kH;
          ad::Tape tm;
          const double fm = policy->demo_loss(tm, demo).item();
          p.data()[i] = keep;
          const double fd = (fp - fm) / (2.0 * kH);
          const double an = p.grad_data() ? p.grad_data()[i] : 0.0;
          worst = std::max(worst,
                           std::abs(an - fd) /
                               std::max(1e-3, std::max(std::abs(an),
                                                       std::abs(fd))));
        }
      }
      CHECK(worst < 1e-4);
    }
  }
}

TEST_CASE("parameters survive a save and load") {
  const std::string path =
      (std::filesystem::temp_directory_path() / "seqtouch_policy_test.bin")
          .string();
  Rng rng(151);
  const ExplorationTrajectory traj = random_traj(5, rng);
  auto a = make_policy(tiny_config(ArchKind::kLstm), 37);
  const SkillPlan plan_a = a->generate(traj);
  a->save(path);

  auto b = make_policy(tiny_config(ArchKind::kLstm), 38);
  b->load(path);
  CHECK(same_params(a->params(), b->params()));
  const SkillPlan plan_b = b->generate(traj);
  for (int i = 0; i < plan_a.valid; ++i) {
    CHECK(plan_a.poses[i].x == plan_b.poses[i].x);
    CHECK(plan_a.poses[i].y == plan_b.poses[i].y);
    CHECK(plan_a.poses[i].phi == plan_b.poses[i].phi);
  }
  std::remove(path.c_str());
}

TEST_CASE("config json round-trips and validates") {
  ModelConfig cfg = tiny_config(ArchKind::kLstm);
  cfg.latent_supervised = true;
  ModelConfig back = ModelConfig::from_json_text(cfg.to_json_text());
  CHECK(back.arch == cfg.arch);
  CHECK(back.d_model == cfg.d_model);
  CHECK(back.latent_supervised == cfg.latent_supervised);
  CHECK_THROWS_AS(ModelConfig::from_json_text("{\"bogus\": 3}"),
                  std::invalid_argument);
  CHECK_THROWS_AS(arch_from_name("perceptron"), std::invalid_argument);
  CHECK(arch_name(ArchKind::kTransformer) == "transformer");
  CHECK(arch_from_name("bc") == ArchKind::kBcLstm);

  ModelConfig bad = tiny_config(ArchKind::kTransformer);
  bad.d_model = 9;  // not divisible by heads
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_SUITE_END();

}  // namespace
}  // namespace seqtouch
