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

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "seqtouch/mdn.hpp"
#include "seqtouch/rng.hpp"
#include "net_util.hpp"

namespace seqtouch {

// Gate order i, f, g, o. Forget bias starts at 1 so early training does not
// wash out the history.
LstmState lstm_cell(ad::Tape& tape, const ad::Tensor& x, const LstmState& s,
                    const ad::Tensor& wx, const ad::Tensor& wh,
                    const ad::Tensor& b, int hidden) {
  const ad::Tensor gates = tape.add_rowvec(
      tape.add(tape.matmul(x, wx), tape.matmul(s.h, wh)), b);
  const ad::Tensor i = tape.sigmoid(tape.cols(gates, 0, hidden));
  const ad::Tensor f = tape.sigmoid(tape.cols(gates, hidden, 2 * hidden));
  const ad::Tensor g = tape.tanh(tape.cols(gates, 2 * hidden, 3 * hidden));
  const ad::Tensor o = tape.sigmoid(tape.cols(gates, 3 * hidden, 4 * hidden));
  LstmState next;
  next.c = tape.add(tape.mul(f, s.c), tape.mul(i, g));
  next.h = tape.mul(o, tape.tanh(next.c));
  return next;
}

namespace {

ad::Tensor forget_biased(int hidden) {
  ad::Tensor b = ad::Tensor::zeros({4 * hidden}, true);
  double* d = b.data();
  for (int i = hidden; i < 2 * hidden; ++i) d[i] = 1.0;
  return b;
}

// Recurrent encoder-decoder with the same z bottleneck as the attention
// model: the decoder receives only (previous via point, z) per step.
class LstmPolicy : public Policy {
 public:
  LstmPolicy(const ModelConfig& cfg, std::uint64_t seed) : Policy(cfg) {
    Rng rng(derive_seed(seed, 11));
    const int h = cfg_.d_model;
    params_.add("enc.lstm.wx", ad::xavier_uniform(12, 4 * h, rng));
    params_.add("enc.lstm.wh", ad::xavier_uniform(h, 4 * h, rng));
    params_.add("enc.lstm.b", forget_biased(h));
    params_.add("enc.z.w", ad::xavier_uniform(h, cfg_.z_dim, rng));
    params_.add("enc.z.b", ad::Tensor::zeros({cfg_.z_dim}, true));
    params_.add("dec.lstm.wx",
                ad::xavier_uniform(kPoseDim + cfg_.z_dim, 4 * h, rng));
    params_.add("dec.lstm.wh", ad::xavier_uniform(h, 4 * h, rng));
    params_.add("dec.lstm.b", forget_biased(h));
    const int raw = mdn_raw_dim(cfg_.mdn_k, kPoseDim);
    params_.add("dec.head.w", ad::xavier_uniform(h, raw, rng));
    ad::Tensor hb = ad::Tensor::zeros({raw}, true);
    for (int i = cfg_.mdn_k * (1 + kPoseDim); i < raw; ++i) {
      hb.data()[i] = std::log(0.01);
    }
    params_.add("dec.head.b", hb);
  }

  std::vector<std::array<double, 3>> prefix_latents(
      const ExplorationTrajectory& exploration) override {
    if (exploration.empty()) {
      throw std::invalid_argument("prefix_latents: empty history");
    }
    if (cfg_.z_dim != 3) {
      throw std::logic_error("prefix_latents: z_dim must be 3");
    }
    ad::Tape tape;
    std::vector<std::array<double, 3>> out;
    encode(tape, exploration, &out);
    return out;
  }

  SkillPlan generate(const ExplorationTrajectory& exploration) override {
    const std::array<double, 3> z = final_latent(exploration);
    SkillPlan plan;
    std::vector<std::array<double, 3>> prev;
    for (int m = 0; m < cfg_.max_dec_len; ++m) {
      ad::Tape tape;
      const ad::Tensor z_t =
          ad::Tensor::from({1, cfg_.z_dim}, {z[0], z[1], z[2]});
      const ad::Tensor raw = decode(tape, z_t, prev, m + 1);
      const auto rc = ad::rows_cols(raw);
      const MixtureParams mix = unpack_mixture(
          raw.data() + (rc.rows - 1) * rc.cols, cfg_.mdn_k, kPoseDim);
      const auto y = mixture_mode(mix);
      prev.push_back({y[0], y[1], y[2]});
      plan.poses.push_back(denormalize_pose({y[0], y[1], y[2]}, cfg_));
    }
    plan.valid = cfg_.max_dec_len;
    return plan;
  }

 private:
  ad::Tensor build_loss(ad::Tape& tape, const DemoRecord& demo) override {
    const ad::Tensor z = encode(tape, demo.exploration, nullptr);
    const int m = static_cast<int>(demo.skill.poses.size());
    std::vector<std::array<double, 3>> prev(m > 1 ? m - 1 : 0);
    for (int i = 0; i + 1 < m; ++i) {
      prev[i] = normalize_pose(demo.skill.poses[i], cfg_);
    }
    const ad::Tensor raw = decode(tape, z, prev, m);
    const ad::Tensor targets = pose_matrix(demo.skill.poses, cfg_);
    ad::Tensor loss = mdn_nll(tape, raw, targets, demo.skill.valid, cfg_.mdn_k);
    if (cfg_.latent_supervised) {
      loss = tape.add(loss,
                      latent_penalty(tape, z,
                                     normalize_hidden(demo.hidden, cfg_),
                                     cfg_.latent_weight));
    }
    return loss;
  }

  // Returns z after the full history; optionally collects the per-prefix
  // readouts along the way.
  ad::Tensor encode(ad::Tape& tape, const ExplorationTrajectory& exploration,
                    std::vector<std::array<double, 3>>* prefixes) {
    const int t = static_cast<int>(exploration.size());
    if (t > cfg_.max_enc_len) {
      throw std::invalid_argument("encode: history longer than max_enc_len");
    }
    const int h = cfg_.d_model;
    const ad::Tensor x = exploration_matrix(exploration, cfg_);
    const ad::Tensor wx = params_.get("enc.lstm.wx");
    const ad::Tensor wh = params_.get("enc.lstm.wh");
    const ad::Tensor b = params_.get("enc.lstm.b");
    LstmState s{ad::Tensor::zeros({1, h}), ad::Tensor::zeros({1, h})};
    ad::Tensor z;
    for (int i = 0; i < t; ++i) {
      s = lstm_cell(tape, tape.rows(x, i, i + 1), s, wx, wh, b, h);
      if (prefixes != nullptr || i == t - 1) {
        z = linear(tape, s.h, params_.get("enc.z.w"), params_.get("enc.z.b"));
        if (prefixes != nullptr) {
          const double* zd = z.data();
          prefixes->push_back({zd[0], zd[1], zd[2]});
        }
      }
    }
    return z;
  }

  ad::Tensor decode(ad::Tape& tape, const ad::Tensor& z,
                    const std::vector<std::array<double, 3>>& prev, int m) {
    if (m > cfg_.max_dec_len) {
      throw std::invalid_argument("decode: plan longer than max_dec_len");
    }
    const int h = cfg_.d_model;
    const ad::Tensor wx = params_.get("dec.lstm.wx");
    const ad::Tensor wh = params_.get("dec.lstm.wh");
    const ad::Tensor b = params_.get("dec.lstm.b");
    LstmState s{ad::Tensor::zeros({1, h}), ad::Tensor::zeros({1, h})};
    std::vector<ad::Tensor> raws;
    raws.reserve(m);
    for (int i = 0; i < m; ++i) {
      ad::Tensor y_prev = i == 0 ? ad::Tensor::zeros({1, kPoseDim})
                                 : ad::Tensor::from({1, kPoseDim},
                                                    {prev[i - 1][0],
                                                     prev[i - 1][1],
                                                     prev[i - 1][2]});
      const ad::Tensor xin = tape.concat_cols({y_prev, z});
      s = lstm_cell(tape, xin, s, wx, wh, b, h);
      raws.push_back(linear(tape, s.h, params_.get("dec.head.w"),
                            params_.get("dec.head.b")));
    }
    return tape.concat_rows(raws);
  }
};

// Plain behavior cloning: one recurrent stream consumes the exploration and
// keeps stepping through the plan with no bottleneck in between.
class BcPolicy : public Policy {
 public:
  static constexpr int kInDim = 16;  // 12 exploration features, 3 pose, flag

  BcPolicy(const ModelConfig& cfg, std::uint64_t seed) : Policy(cfg) {
    Rng rng(derive_seed(seed, 13));
    const int h = cfg_.d_model;
    params_.add("bc.lstm.wx", ad::xavier_uniform(kInDim, 4 * h, rng));
    params_.add("bc.lstm.wh", ad::xavier_uniform(h, 4 * h, rng));
    params_.add("bc.lstm.b", forget_biased(h));
    const int raw = mdn_raw_dim(cfg_.mdn_k, kPoseDim);
    params_.add("bc.head.w", ad::xavier_uniform(h, raw, rng));
    ad::Tensor hb = ad::Tensor::zeros({raw}, true);
    for (int i = cfg_.mdn_k * (1 + kPoseDim); i < raw; ++i) {
      hb.data()[i] = std::log(0.01);
    }
    params_.add("bc.head.b", hb);
  }

  std::vector<std::array<double, 3>> prefix_latents(
      const ExplorationTrajectory&) override {
    throw std::logic_error("bc policy has no latent bottleneck");
  }

  SkillPlan generate(const ExplorationTrajectory& exploration) override {
    SkillPlan plan;
    std::vector<std::array<double, 3>> prev;
    for (int m = 0; m < cfg_.max_dec_len; ++m) {
      ad::Tape tape;
      const ad::Tensor raw = forward(tape, exploration, prev, m + 1);
      const auto rc = ad::rows_cols(raw);
      const MixtureParams mix = unpack_mixture(
          raw.data() + (rc.rows - 1) * rc.cols, cfg_.mdn_k, kPoseDim);
      const auto y = mixture_mode(mix);
      prev.push_back({y[0], y[1], y[2]});
      plan.poses.push_back(denormalize_pose({y[0], y[1], y[2]}, cfg_));
    }
    plan.valid = cfg_.max_dec_len;
    return plan;
  }

 private:
  ad::Tensor build_loss(ad::Tape& tape, const DemoRecord& demo) override {
    const int m = static_cast<int>(demo.skill.poses.size());
    std::vector<std::array<double, 3>> prev(m > 1 ? m - 1 : 0);
    for (int i = 0; i + 1 < m; ++i) {
      prev[i] = normalize_pose(demo.skill.poses[i], cfg_);
    }
    const ad::Tensor raw = forward(tape, demo.exploration, prev, m);
    const ad::Tensor targets = pose_matrix(demo.skill.poses, cfg_);
    return mdn_nll(tape, raw, targets, demo.skill.valid, cfg_.mdn_k);
  }

  ad::Tensor forward(ad::Tape& tape, const ExplorationTrajectory& exploration,
                     const std::vector<std::array<double, 3>>& prev, int m) {
    const int t = static_cast<int>(exploration.size());
    if (t < 1 || t > cfg_.max_enc_len) {
      throw std::invalid_argument("forward: history length out of range");
    }
    if (m > cfg_.max_dec_len) {
      throw std::invalid_argument("forward: plan longer than max_dec_len");
    }
    const int h = cfg_.d_model;
    const ad::Tensor wx = params_.get("bc.lstm.wx");
    const ad::Tensor wh = params_.get("bc.lstm.wh");
    const ad::Tensor b = params_.get("bc.lstm.b");
    LstmState s{ad::Tensor::zeros({1, h}), ad::Tensor::zeros({1, h})};
    for (const ExplorationStep& step : exploration) {
      const auto f = normalize_step(step, cfg_);
      std::vector<double> row(kInDim, 0.0);
      std::copy(f.begin(), f.end(), row.begin());
      s = lstm_cell(tape, ad::Tensor::from({1, kInDim}, std::move(row)), s,
                    wx, wh, b, h);
    }
    std::vector<ad::Tensor> raws;
    raws.reserve(m);
    for (int i = 0; i < m; ++i) {
      std::vector<double> row(kInDim, 0.0);
      if (i > 0) {
        row[12] = prev[i - 1][0];
        row[13] = prev[i - 1][1];
        row[14] = prev[i - 1][2];
      }
      row[15] = 1.0;  // decode phase flag
      s = lstm_cell(tape, ad::Tensor::from({1, kInDim}, std::move(row)), s,
                    wx, wh, b, h);
      raws.push_back(linear(tape, s.h, params_.get("bc.head.w"),
                            params_.get("bc.head.b")));
    }
    return tape.concat_rows(raws);
  }
};

}  // namespace

std::unique_ptr<Policy> make_lstm_policy(const ModelConfig& cfg,
                                         std::uint64_t seed) {
  return std::make_unique<LstmPolicy>(cfg, seed);
}

std::unique_ptr<Policy> make_bc_policy(const ModelConfig& cfg,
                                       std::uint64_t seed) {
  return std::make_unique<BcPolicy>(cfg, seed);
}

}  // namespace seqtouch
