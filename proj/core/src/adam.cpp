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

#include "seqtouch/adam.hpp"

#include <cmath>

namespace seqtouch::ad {

Adam::Adam(const ParamStore& params, AdamConfig cfg)
    : params_(params), cfg_(cfg) {
  m_.reserve(params_.count());
  v_.reserve(params_.count());
  for (const auto& t : params_.tensors()) {
    m_.emplace_back(t.size(), 0.0);
    v_.emplace_back(t.size(), 0.0);
  }
}

void Adam::step() {
  ++t_;
  double clip_scale = 1.0;
  if (cfg_.clip_norm > 0.0) {
    double sq = 0.0;
    for (auto t : params_.tensors()) {
      if (!t.has_grad()) continue;
      const double* g = t.grad();
      for (std::int64_t i = 0; i < t.size(); ++i) sq += g[i] * g[i];
    }
    double norm = std::sqrt(sq);
    if (norm > cfg_.clip_norm) clip_scale = cfg_.clip_norm / norm;
  }
  double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (std::size_t k = 0; k < params_.count(); ++k) {
    Tensor t = params_.tensors()[k];
    double* p = t.data();
    const double* g = t.grad();  // allocates zeros if never touched
    auto& m = m_[k];
    auto& v = v_[k];
    for (std::int64_t i = 0; i < t.size(); ++i) {
      double gi = g[i] * clip_scale;
      m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * gi;
      v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * gi * gi;
      double mhat = m[i] / bc1;
      double vhat = v[i] / bc2;
      p[i] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
    }
  }
}

}  // namespace seqtouch::ad
