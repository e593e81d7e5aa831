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
#include <vector>

#include "doctest.h"
#include "seqtouch/adam.hpp"
#include "seqtouch/params.hpp"

namespace seqtouch::ad {
namespace {

// Straight-line reference implementation kept independent of the optimizer
// under test: plain loops, bias correction, global norm clip.
struct ReferenceAdam {
  AdamConfig cfg;
  std::vector<double> w, m, v;
  long t = 0;

  void step(std::vector<double> g) {
    double norm2 = 0.0;
    for (double x : g) norm2 += x * x;
    const double norm = std::sqrt(norm2);
    if (cfg.clip_norm > 0.0 && norm > cfg.clip_norm) {
      for (double& x : g) x *= cfg.clip_norm / norm;
    }
    ++t;
    for (std::size_t i = 0; i < w.size(); ++i) {
      m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
      v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
      const double mh = m[i] / (1.0 - std::pow(cfg.beta1, t));
      const double vh = v[i] / (1.0 - std::pow(cfg.beta2, t));
      w[i] -= cfg.lr * mh / (std::sqrt(vh) + cfg.eps);
    }
  }
};

TEST_SUITE_BEGIN("adam");

TEST_CASE("updates track the reference implementation step for step") {
  AdamConfig cfg;
  cfg.lr = 0.01;
  cfg.clip_norm = 0.0;

  ParamStore store;
  Tensor w = store.add("w", Tensor::from({3}, {0.5, -1.0, 2.0},
                                         /*requires_grad=*/true));
  Adam opt(store, cfg);

  ReferenceAdam ref{cfg, {0.5, -1.0, 2.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}};

  for (int it = 0; it < 30; ++it) {
    std::vector<double> g = {std::sin(0.3 * it + 1.0), std::cos(0.5 * it),
                             0.25 * it - 2.0};
    w.zero_grad();
    double* gw = w.grad();
    for (int i = 0; i < 3; ++i) gw[i] = g[i];
    opt.step();
    ref.step(g);
    for (int i = 0; i < 3; ++i) {
      CHECK(w.at(i) == doctest::Approx(ref.w[i]).epsilon(1e-14));
    }
  }
  CHECK(opt.t() == 30);
}

TEST_CASE("global norm clip rescales large gradients") {
  AdamConfig cfg;
  cfg.clip_norm = 1.0;

  ParamStore store;
  Tensor a = store.add("a", Tensor::from({2}, {0.0, 0.0},
                                         /*requires_grad=*/true));
  Tensor b = store.add("b", Tensor::scalar(0.0, /*requires_grad=*/true));
  Adam opt(store, cfg);

  // Gradient (3, 4, 12): norm 13, clipped by 1/13. The reference treats the
  // whole store as one flat vector, matching the optimizer's global norm.
  ReferenceAdam ref{cfg, {0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}};
  a.grad()[0] = 3.0;
  a.grad()[1] = 4.0;
  b.grad()[0] = 12.0;
  opt.step();
  ref.step({3.0, 4.0, 12.0});
  CHECK(a.at(0) == doctest::Approx(ref.w[0]).epsilon(1e-14));
  CHECK(a.at(1) == doctest::Approx(ref.w[1]).epsilon(1e-14));
  CHECK(b.at(0) == doctest::Approx(ref.w[2]).epsilon(1e-14));
}

TEST_CASE("zero gradient leaves parameters exactly unchanged") {
  ParamStore store;
  Tensor w = store.add("w", Tensor::from({2}, {1.25, -0.5},
                                         /*requires_grad=*/true));
  Adam opt(store);
  w.zero_grad();
  (void)w.grad();  // allocated, all zero
  opt.step();
  CHECK(w.at(0) == 1.25);
  CHECK(w.at(1) == -0.5);
}

TEST_CASE("second moment state persists between steps") {
  AdamConfig cfg;
  cfg.clip_norm = 0.0;
  ParamStore store;
  Tensor w = store.add("w", Tensor::scalar(0.0, /*requires_grad=*/true));
  Adam opt(store, cfg);
  ReferenceAdam ref{cfg, {0.0}, {0.0}, {0.0}};
  // A sign flip mid-run only matches if m and v carried over correctly.
  for (double g : {1.0, 1.0, -1.0, 0.5, -2.0}) {
    w.zero_grad();
    w.grad()[0] = g;
    opt.step();
    ref.step({g});
  }
  CHECK(w.at(0) == doctest::Approx(ref.w[0]).epsilon(1e-14));
}

TEST_SUITE_END();

}  // namespace
}  // namespace seqtouch::ad
