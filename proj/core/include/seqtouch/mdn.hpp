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

#ifndef SEQTOUCH_MDN_HPP_
#define SEQTOUCH_MDN_HPP_

#include <vector>

#include "seqtouch/rng.hpp"
#include "seqtouch/tape.hpp"

namespace seqtouch {

// Additive variance floor shared by the graph loss and the value-side
// density so sampling, scoring and training all see the same distribution.
inline constexpr double kMdnVarFloor = 1e-6;

// Raw head layout per row: k mixture logits, then k*d component means
// (component-major), then k*d log standard deviations.
inline int mdn_raw_dim(int k, int d) { return k * (1 + 2 * d); }

// Mixture of k diagonal Gaussians over a d-dimensional pose.
struct MixtureParams {
  int k = 0;
  int d = 0;
  std::vector<double> weights;      // [k], softmax of the logits
  std::vector<double> log_weights;  // [k]
  std::vector<double> means;        // [k*d]
  std::vector<double> vars;         // [k*d], exp(2*log_sigma) + floor
};

MixtureParams unpack_mixture(const double* raw, int k, int d);

double mixture_log_prob(const MixtureParams& m, const double* x);
// Mean of the heaviest component; ties resolve to the lowest index.
std::vector<double> mixture_mode(const MixtureParams& m);
std::vector<double> sample_mixture(const MixtureParams& m, Rng& rng);

// Mean negative log-likelihood of the first valid_rows targets under the
// per-row mixtures described by raw. raw is [M, k*(1+2d)], targets [M, d];
// rows at and beyond valid_rows do not contribute.
ad::Tensor mdn_nll(ad::Tape& tape, const ad::Tensor& raw,
                   const ad::Tensor& targets, int valid_rows, int k);

}  // namespace seqtouch

#endif  // SEQTOUCH_MDN_HPP_
