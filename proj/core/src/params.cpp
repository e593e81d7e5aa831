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

#include "seqtouch/params.hpp"

#include <cmath>
#include <stdexcept>

namespace seqtouch::ad {

Tensor ParamStore::add(const std::string& name, Tensor t) {
  if (index_.count(name)) {
    throw std::invalid_argument("params: duplicate name " + name);
  }
  index_[name] = tensors_.size();
  names_.push_back(name);
  tensors_.push_back(t);
  return t;
}

Tensor ParamStore::get(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw std::out_of_range("params: unknown name " + name);
  return tensors_[it->second];
}

bool ParamStore::contains(const std::string& name) const {
  return index_.count(name) != 0;
}

std::int64_t ParamStore::total_size() const {
  std::int64_t n = 0;
  for (const auto& t : tensors_) n += t.size();
  return n;
}

void ParamStore::zero_grad() {
  for (auto& t : tensors_) t.zero_grad();
}

Tensor xavier_uniform(int fan_in, int fan_out, Rng& rng) {
  double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::vector<double> data(static_cast<std::size_t>(fan_in) * fan_out);
  for (auto& x : data) x = rng.uniform(-a, a);
  return Tensor::from({fan_in, fan_out}, std::move(data), true);
}

Tensor sinusoidal_encoding(int max_len, int d_model) {
  Tensor pe = Tensor::zeros({max_len, d_model});
  double* p = pe.data();
  for (int pos = 0; pos < max_len; ++pos) {
    for (int i = 0; i < d_model; i += 2) {
      double rate = std::pow(10000.0, -static_cast<double>(i) / d_model);
      double angle = pos * rate;
      p[pos * d_model + i] = std::sin(angle);
      if (i + 1 < d_model) p[pos * d_model + i + 1] = std::cos(angle);
    }
  }
  return pe;
}

}  // namespace seqtouch::ad
