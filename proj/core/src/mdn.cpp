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

#include "seqtouch/mdn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace seqtouch {
namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
}  // namespace

MixtureParams unpack_mixture(const double* raw, int k, int d) {
  MixtureParams m;
  m.k = k;
  m.d = d;
  m.weights.resize(k);
  m.log_weights.resize(k);
  m.means.assign(raw + k, raw + k + k * d);
  m.vars.resize(k * d);

  double max_logit = raw[0];
  for (int i = 1; i < k; ++i) max_logit = std::max(max_logit, raw[i]);
  double z = 0.0;
  for (int i = 0; i < k; ++i) z += std::exp(raw[i] - max_logit);
  const double log_z = std::log(z);
  for (int i = 0; i < k; ++i) {
    m.log_weights[i] = raw[i] - max_logit - log_z;
    m.weights[i] = std::exp(m.log_weights[i]);
  }
  const double* ls = raw + k + k * d;
  for (int i = 0; i < k * d; ++i) {
    m.vars[i] = std::exp(2.0 * ls[i]) + kMdnVarFloor;
  }
  return m;
}

double mixture_log_prob(const MixtureParams& m, const double* x) {
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> comp(m.k);
  for (int i = 0; i < m.k; ++i) {
    double lp = m.log_weights[i];
    for (int j = 0; j < m.d; ++j) {
      const double var = m.vars[i * m.d + j];
      const double diff = x[j] - m.means[i * m.d + j];
      lp += -0.5 * (kLog2Pi + std::log(var) + diff * diff / var);
    }
    comp[i] = lp;
    best = std::max(best, lp);
  }
  double acc = 0.0;
  for (int i = 0; i < m.k; ++i) acc += std::exp(comp[i] - best);
  return best + std::log(acc);
}

std::vector<double> mixture_mode(const MixtureParams& m) {
  int arg = 0;
  for (int i = 1; i < m.k; ++i) {
    if (m.weights[i] > m.weights[arg]) arg = i;
  }
  return std::vector<double>(m.means.begin() + arg * m.d,
                             m.means.begin() + (arg + 1) * m.d);
}

std::vector<double> sample_mixture(const MixtureParams& m, Rng& rng) {
  const double u = rng.uniform();
  int pick = m.k - 1;
  double acc = 0.0;
  for (int i = 0; i < m.k; ++i) {
    acc += m.weights[i];
    if (u < acc) {
      pick = i;
      break;
    }
  }
  std::vector<double> x(m.d);
  for (int j = 0; j < m.d; ++j) {
    x[j] = m.means[pick * m.d + j] +
           std::sqrt(m.vars[pick * m.d + j]) * rng.normal();
  }
  return x;
}

ad::Tensor mdn_nll(ad::Tape& tape, const ad::Tensor& raw,
                   const ad::Tensor& targets, int valid_rows, int k) {
  const auto raw_rc = ad::rows_cols(raw);
  const auto tgt_rc = ad::rows_cols(targets);
  const int d = static_cast<int>(tgt_rc.cols);
  const int m_rows = static_cast<int>(raw_rc.rows);
  if (raw_rc.cols != mdn_raw_dim(k, d)) {
    throw std::invalid_argument("mdn_nll: raw width does not match k and d");
  }
  if (tgt_rc.rows != raw_rc.rows) {
    throw std::invalid_argument("mdn_nll: row count mismatch");
  }
  if (valid_rows < 1 || valid_rows > m_rows) {
    throw std::invalid_argument("mdn_nll: valid_rows out of range");
  }

  const ad::Tensor log_pi = tape.log_softmax(tape.cols(raw, 0, k));
  const ad::Tensor means = tape.cols(raw, k, k + k * d);
  const ad::Tensor log_sigma = tape.cols(raw, k + k * d, k + 2 * k * d);
  const ad::Tensor var =
      tape.add_scalar(tape.exp(tape.scale(log_sigma, 2.0)), kMdnVarFloor);

  std::vector<ad::Tensor> tiles(k, targets);
  const ad::Tensor x = tape.concat_cols(tiles);
  const ad::Tensor diff = tape.sub(x, means);
  const ad::Tensor quad = tape.div(tape.mul(diff, diff), var);
  const ad::Tensor per_dim = tape.add(quad, tape.log(var));  // [M, k*d]

  const ad::Tensor per_comp = tape.reshape(
      tape.sum_rows(tape.reshape(per_dim, {m_rows * k, d})), {m_rows, k});
  ad::Tensor comp = tape.add(log_pi, tape.scale(per_comp, -0.5));
  comp = tape.add_scalar(comp, -0.5 * d * kLog2Pi);
  const ad::Tensor lse = tape.logsumexp(comp);  // [M, 1]
  const ad::Tensor valid = tape.rows(lse, 0, valid_rows);
  return tape.scale(tape.sum_all(valid), -1.0 / valid_rows);
}

}  // namespace seqtouch
