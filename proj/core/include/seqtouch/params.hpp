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

#ifndef SEQTOUCH_PARAMS_HPP_
#define SEQTOUCH_PARAMS_HPP_

#include <map>
#include <string>
#include <vector>

#include "seqtouch/rng.hpp"
#include "seqtouch/tensor.hpp"

namespace seqtouch::ad {

// Ordered collection of named trainable tensors. Order is creation order and
// is part of the training determinism contract (the optimizer walks it).
class ParamStore {
 public:
  Tensor add(const std::string& name, Tensor t);
  Tensor get(const std::string& name) const;
  bool contains(const std::string& name) const;

  const std::vector<std::string>& names() const { return names_; }
  const std::vector<Tensor>& tensors() const { return tensors_; }
  std::size_t count() const { return tensors_.size(); }
  std::int64_t total_size() const;

  void zero_grad();

 private:
  std::vector<std::string> names_;
  std::vector<Tensor> tensors_;
  std::map<std::string, std::size_t> index_;
};

// Xavier/Glorot uniform init for a [fan_in, fan_out] weight matrix.
Tensor xavier_uniform(int fan_in, int fan_out, Rng& rng);

// Classic fixed sinusoidal position table, shape [max_len, d_model].
Tensor sinusoidal_encoding(int max_len, int d_model);

}  // namespace seqtouch::ad

#endif  // SEQTOUCH_PARAMS_HPP_
