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

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "seqtouch/adam.hpp"
#include "seqtouch/env.hpp"
#include "seqtouch/experts.hpp"
#include "seqtouch/policy.hpp"
#include "seqtouch/rng.hpp"
#include "seqtouch/tape.hpp"
#include "seqtouch/tensor.hpp"

namespace seqtouch {
namespace {

DemoRecord MakeDemo(std::uint64_t seed) {
  ContactEnv env{EnvConfig{}};
  auto [state, obs] = env.reset(seed);
  const auto& tpl = exploration_templates()[seed % 5];
  ExplorationRollout rollout = run_exploration(env, state, tpl);
  DemoRecord demo;
  demo.hidden = state.hidden;
  demo.template_id = tpl.id;
  demo.exploration = rollout.traj;
  demo.skill = oracle_skill(state.hidden);
  return demo;
}

void BM_TapeMatmul(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(7);
  const ad::Tensor a = ad::xavier_uniform(n, n, rng);
  const ad::Tensor b = ad::xavier_uniform(n, n, rng);
  for (auto _ : state) {
    ad::Tape tape;
    ad::Tensor c = tape.matmul(a, b);
    benchmark::DoNotOptimize(c.data()[0]);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_TapeMatmul)->Arg(16)->Arg(64)->Arg(128);

void BM_MatmulBackward(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(7);
  const ad::Tensor a = ad::xavier_uniform(n, n, rng);
  const ad::Tensor b = ad::xavier_uniform(n, n, rng);
  for (auto _ : state) {
    ad::Tape tape;
    ad::Tensor loss = tape.sum_all(tape.matmul(a, b));
    tape.backward(loss);
    benchmark::DoNotOptimize(a.grad()[0]);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_MatmulBackward)->Arg(16)->Arg(64);

void BM_EnvStep(benchmark::State& state) {
  ContactEnv env{EnvConfig{}};
  auto [world, obs] = env.reset(11);
  const Action down{0.0, -0.01, 0.0};
  for (auto _ : state) {
    auto [next, o] = env.step(world, down);
    benchmark::DoNotOptimize(o.wrench.fy);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_EnvStep);

void BM_ExplorationRollout(benchmark::State& state) {
  ContactEnv env{EnvConfig{}};
  auto [world, obs] = env.reset(11);
  const auto& tpl = exploration_templates()[0];
  for (auto _ : state) {
    ExplorationRollout rollout = run_exploration(env, world, tpl);
    benchmark::DoNotOptimize(rollout.traj.size());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ExplorationRollout);

void BM_PolicyLoss(benchmark::State& state) {
  ModelConfig cfg;
  cfg.arch = state.range(0) == 0 ? ArchKind::kTransformer : ArchKind::kLstm;
  auto policy = make_policy(cfg, 5);
  const DemoRecord demo = MakeDemo(3);
  for (auto _ : state) {
    ad::Tape tape;
    ad::Tensor loss = policy->demo_loss(tape, demo);
    benchmark::DoNotOptimize(loss.data()[0]);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PolicyLoss)->Arg(0)->Arg(1);

void BM_TrainStep(benchmark::State& state) {
  ModelConfig cfg;
  auto policy = make_policy(cfg, 5);
  const DemoRecord demo = MakeDemo(3);
  ad::Adam adam(policy->params(), ad::AdamConfig{});
  for (auto _ : state) {
    ad::Tape tape;
    ad::Tensor loss = policy->demo_loss(tape, demo);
    tape.backward(loss);
    adam.step();
    benchmark::DoNotOptimize(loss.data()[0]);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_TrainStep);

}  // namespace
}  // namespace seqtouch

BENCHMARK_MAIN();
