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

#ifndef SEQTOUCH_ADAM_HPP_
#define SEQTOUCH_ADAM_HPP_

#include <vector>

#include "seqtouch/params.hpp"

namespace seqtouch::ad {

struct AdamConfig {
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  // Global gradient-norm clip applied before the moment update; <= 0 disables.
  double clip_norm = 10.0;
};

// Adam with bias correction over a ParamStore. Moments are held per element;
// step() consumes the current .grad buffers and leaves them untouched (call
// zero_grad() afterwards, as in the usual loop).
class Adam {
 public:
  Adam(const ParamStore& params, AdamConfig cfg = {});

  void step();
  std::int64_t t() const { return t_; }
  const AdamConfig& config() const { return cfg_; }

 private:
  ParamStore params_;
  AdamConfig cfg_;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
  std::int64_t t_ = 0;
};

}  // namespace seqtouch::ad

#endif  // SEQTOUCH_ADAM_HPP_
