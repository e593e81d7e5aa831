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

#ifndef SEQTOUCH_CORE_SRC_NET_UTIL_HPP_
#define SEQTOUCH_CORE_SRC_NET_UTIL_HPP_

#include <memory>
#include <vector>

#include "seqtouch/policy.hpp"
#include "seqtouch/tape.hpp"

namespace seqtouch {

inline ad::Tensor linear(ad::Tape& tape, const ad::Tensor& x,
                         const ad::Tensor& w, const ad::Tensor& b) {
  return tape.add_rowvec(tape.matmul(x, w), b);
}

// [rows, 12] constant input matrix for an exploration history.
inline ad::Tensor exploration_matrix(const ExplorationTrajectory& exploration,
                                     const ModelConfig& cfg) {
  const int t = static_cast<int>(exploration.size());
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(t) * 12);
  for (const ExplorationStep& s : exploration) {
    const auto row = normalize_step(s, cfg);
    data.insert(data.end(), row.begin(), row.end());
  }
  return ad::Tensor::from({t, 12}, std::move(data));
}

// [rows, 3] constant matrix of normalized via-point poses.
inline ad::Tensor pose_matrix(const std::vector<Pose>& poses,
                              const ModelConfig& cfg) {
  const int m = static_cast<int>(poses.size());
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(m) * 3);
  for (const Pose& p : poses) {
    const auto row = normalize_pose(p, cfg);
    data.insert(data.end(), row.begin(), row.end());
  }
  return ad::Tensor::from({m, 3}, std::move(data));
}

// Additive causal mask: 0 on and below the diagonal, -1e9 above.
inline ad::Tensor causal_mask(int n) {
  std::vector<double> data(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      data[static_cast<std::size_t>(i) * n + j] = -1e9;
    }
  }
  return ad::Tensor::from({n, n}, std::move(data));
}

std::unique_ptr<Policy> make_transformer_policy(const ModelConfig& cfg,
                                                std::uint64_t seed);
std::unique_ptr<Policy> make_lstm_policy(const ModelConfig& cfg,
                                         std::uint64_t seed);
std::unique_ptr<Policy> make_bc_policy(const ModelConfig& cfg,
                                       std::uint64_t seed);

// Shared by the recurrent architectures: one LSTM cell application.
struct LstmState {
  ad::Tensor h;
  ad::Tensor c;
};

LstmState lstm_cell(ad::Tape& tape, const ad::Tensor& x, const LstmState& s,
                    const ad::Tensor& wx, const ad::Tensor& wh,
                    const ad::Tensor& b, int hidden);

}  // namespace seqtouch

#endif  // SEQTOUCH_CORE_SRC_NET_UTIL_HPP_
