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
#include <functional>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "seqtouch/rng.hpp"
#include "seqtouch/tape.hpp"
#include "seqtouch/tensor.hpp"

namespace seqtouch::ad {
namespace {

using LossFn = std::function<Tensor(Tape&)>;

// Central-difference check of d(loss)/d(leaf) for every element of every
// leaf. Returns the worst relative error, scaled by max(1e-3, |a|, |b|) so
// near-zero gradients compare absolutely.
double max_grad_rel_err(const std::vector<Tensor>& leaves, const LossFn& fn) {
  constexpr double kH = 1e-5;
  Tape tape;
  Tensor loss = fn(tape);
  for (const Tensor& leaf : leaves) leaf.zero_grad();
  tape.backward(loss);
  double worst = 0.0;
  for (const Tensor& leaf : leaves) {
    REQUIRE(leaf.has_grad());
    for (std::int64_t i = 0; i < leaf.size(); ++i) {
      const double keep = leaf.data()[i];
      leaf.data()[i] = keep + kH;
      Tape tp;
      const double fp = fn(tp).item();
      leaf.data()[i] = keep - kH;
      Tape tm;
      const double fm = fn(tm).item();
      leaf.data()[i] = keep;
      const double fd = (fp - fm) / (2.0 * kH);
      const double an = leaf.grad_data()[i];
      const double scale =
          std::max(1e-3, std::max(std::abs(an), std::abs(fd)));
      worst = std::max(worst, std::abs(an - fd) / scale);
    }
  }
  return worst;
}

Tensor random_leaf(std::vector<int> shape, Rng& rng, bool away_from_zero) {
  std::int64_t n = 1;
  for (int d : shape) n *= d;
  std::vector<double> values(static_cast<std::size_t>(n));
  for (double& v : values) {
    const double u = rng.uniform(0.2, 1.4);
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    v = away_from_zero ? sign * u : rng.uniform(-1.2, 1.2);
  }
  return Tensor::from(std::move(shape), std::move(values),
                      /*requires_grad=*/true);
}

TEST_SUITE_BEGIN("autodiff");

TEST_CASE("sum of squares has gradient 2x") {
  Tensor x = Tensor::from({3}, {1.0, 2.0, 3.0}, /*requires_grad=*/true);
  Tape tape;
  Tensor loss = tape.sum_all(tape.mul(x, x));
  CHECK(loss.item() == 14.0);
  tape.backward(loss);
  const double* g = x.grad_data();
  CHECK(g[0] == 2.0);
  CHECK(g[1] == 4.0);
  CHECK(g[2] == 6.0);
}

TEST_CASE("matmul forward matches the hand result") {
  Tape tape;
  Tensor a = Tensor::from({2, 2}, {1.0, 2.0, 3.0, 4.0});
  Tensor b = Tensor::from({2, 1}, {0.0, 1.0});
  Tensor c = tape.matmul(a, b);
  CHECK(c.dim(0) == 2);
  CHECK(c.dim(1) == 1);
  CHECK(c.at(0) == 2.0);
  CHECK(c.at(1) == 4.0);
}

TEST_CASE("gradients accumulate across repeated backward calls") {
  Tensor x = Tensor::from({2}, {1.0, -2.0}, /*requires_grad=*/true);
  Tape tape;
  Tensor loss = tape.sum_all(tape.mul(x, x));
  tape.backward(loss);
  tape.backward(loss);
  CHECK(x.grad_data()[0] == 4.0);
  CHECK(x.grad_data()[1] == -8.0);
  x.zero_grad();
  CHECK(x.grad_data()[0] == 0.0);
}

TEST_CASE("backward rejects non-scalar losses") {
  Tensor x = Tensor::from({2}, {1.0, 2.0}, /*requires_grad=*/true);
  Tape tape;
  Tensor y = tape.mul(x, x);
  CHECK_THROWS_AS(tape.backward(y), std::invalid_argument);
}

TEST_CASE("elementwise chain matches finite differences") {
  Rng rng(101);
  Tensor a = random_leaf({2, 3}, rng, /*away_from_zero=*/true);
  Tensor b = random_leaf({2, 3}, rng, /*away_from_zero=*/true);
  Tensor c = random_leaf({2, 3}, rng, /*away_from_zero=*/false);
  LossFn fn = [&](Tape& t) {
    Tensor u = t.mul(t.tanh(a), t.sigmoid(b));
    Tensor v = t.div(a, t.add_scalar(t.exp(c), 1.5));
    Tensor w = t.log(t.add_scalar(t.mul(b, b), 1.0));
    return t.mean_all(t.sub(t.add(u, v), w));
  };
  CHECK(max_grad_rel_err({a, b, c}, fn) < 1e-4);
}

TEST_CASE("matrix ops match finite differences") {
  Rng rng(202);
  Tensor a = random_leaf({3, 4}, rng, /*away_from_zero=*/true);
  Tensor b = random_leaf({2, 4}, rng, /*away_from_zero=*/true);
  LossFn fn = [&](Tape& t) {
    Tensor prod = t.matmul(t.relu(a), t.transpose(b));  // [3, 2]
    Tensor head = t.rows(prod, 0, 2);
    Tensor tail = t.cols(prod, 1, 2);
    return t.add(t.add(t.sum_all(head), t.sum_all(tail)),
                 t.sum_all(t.add(t.scale(a, 0.25), a)));
  };
  CHECK(max_grad_rel_err({a, b}, fn) < 1e-4);
}

TEST_CASE("normalization and shape ops match finite differences") {
  Rng rng(303);
  Tensor x = random_leaf({3, 4}, rng, /*away_from_zero=*/false);
  Tensor y = random_leaf({3, 2}, rng, /*away_from_zero=*/false);
  Tensor z = random_leaf({2, 4}, rng, /*away_from_zero=*/false);
  Tensor v = random_leaf({4}, rng, /*away_from_zero=*/false);
  Tensor gain = random_leaf({4}, rng, /*away_from_zero=*/true);
  Tensor bias = random_leaf({4}, rng, /*away_from_zero=*/false);
  LossFn fn = [&](Tape& t) {
    Tensor sm = t.mul(t.softmax(x), t.log_softmax(x));
    Tensor lse = t.logsumexp(t.concat_cols({x, t.matmul(y, t.transpose(z))}));
    Tensor ln = t.layer_norm(t.add_rowvec(x, v), gain, bias);
    Tensor stack = t.concat_rows({x, z});
    Tensor flat = t.reshape(y, {2, 3});
    Tensor parts = t.add(t.sum_all(t.sum_rows(sm)), t.sum_all(lse));
    parts = t.add(parts, t.sum_all(ln));
    parts = t.add(parts, t.sum_all(t.scale(stack, 0.5)));
    return t.add(parts, t.sum_all(flat));
  };
  CHECK(max_grad_rel_err({x, y, z, v, gain, bias}, fn) < 1e-4);
}

TEST_CASE("softmax rows sum to one and logsumexp collapses the last axis") {
  Tape tape;
  Tensor x = Tensor::from({2, 3}, {0.1, -2.0, 3.0, 1.0, 1.0, 1.0});
  Tensor sm = tape.softmax(x);
  for (int r = 0; r < 2; ++r) {
    double sum = 0.0;
    for (int c = 0; c < 3; ++c) sum += sm.at(r * 3 + c);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
  Tensor lse = tape.logsumexp(x);
  CHECK(lse.dim(0) == 2);
  CHECK(lse.dim(1) == 1);
  // Row of equal entries: logsumexp = x + log(n).
  CHECK(lse.at(1) == doctest::Approx(1.0 + std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("log rejects non-positive inputs") {
  Tape tape;
  Tensor x = Tensor::from({2}, {1.0, 0.0});
  CHECK_THROWS_AS(tape.log(x), std::domain_error);
}

TEST_CASE("shape mismatches and bad ranges are rejected") {
  Tape tape;
  Tensor a = Tensor::zeros({2, 3});
  Tensor b = Tensor::zeros({3, 2});
  CHECK_THROWS_AS(tape.add(a, b), std::invalid_argument);
  CHECK_THROWS_AS(tape.matmul(a, a), std::invalid_argument);
  CHECK_THROWS_AS(tape.rows(a, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(tape.cols(a, 0, 4), std::invalid_argument);
  CHECK_THROWS_AS(tape.reshape(a, {4, 2}), std::invalid_argument);
}

TEST_SUITE_END();

}  // namespace
}  // namespace seqtouch::ad
