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
#include <string>
#include <vector>

#include "seqtouch/mdn.hpp"
#include "seqtouch/rng.hpp"
#include "net_util.hpp"

namespace seqtouch {
namespace {

// Pre-norm encoder-decoder with causal self-attention on both sides. The
// decoder sees the exploration only through the z bottleneck, added to every
// decoder token.
class TransformerPolicy : public Policy {
 public:
  TransformerPolicy(const ModelConfig& cfg, std::uint64_t seed) : Policy(cfg) {
    Rng rng(derive_seed(seed, 7));
    const int d = cfg_.d_model;
    add_linear(rng, "enc.in", 12, d);
    for (int l = 0; l < cfg_.enc_layers; ++l) {
      add_block(rng, "enc.l" + std::to_string(l));
    }
    add_norm("enc.ln_f");
    params_.add("enc.pool.q", ad::xavier_uniform(1, d, rng));
    add_linear(rng, "enc.pool.k", d, d);
    add_linear(rng, "enc.pool.v", d, d);
    add_linear(rng, "enc.z", d, cfg_.z_dim);

    add_linear(rng, "dec.in", kPoseDim, d);
    params_.add("dec.start", ad::xavier_uniform(1, d, rng));
    add_linear(rng, "dec.z", cfg_.z_dim, d);
    for (int l = 0; l < cfg_.dec_layers; ++l) {
      add_block(rng, "dec.l" + std::to_string(l));
    }
    add_norm("dec.ln_f");
    add_linear(rng, "dec.head", d, mdn_raw_dim(cfg_.mdn_k, kPoseDim));
    init_sigma_bias();

    pos_enc_ = ad::sinusoidal_encoding(cfg_.max_enc_len, d);
    pos_dec_ = ad::sinusoidal_encoding(cfg_.max_dec_len, d);
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
    const ad::Tensor z_all = encode(tape, exploration);
    std::vector<std::array<double, 3>> out(exploration.size());
    const double* z = z_all.data();
    for (std::size_t t = 0; t < exploration.size(); ++t) {
      out[t] = {z[3 * t], z[3 * t + 1], z[3 * t + 2]};
    }
    return out;
  }

  SkillPlan generate(const ExplorationTrajectory& exploration) override {
    const std::array<double, 3> z = final_latent(exploration);
    SkillPlan plan;
    std::vector<std::array<double, 3>> prev;
    for (int m = 0; m < cfg_.max_dec_len; ++m) {
      ad::Tape tape;
      const ad::Tensor z_t = ad::Tensor::from({1, cfg_.z_dim},
                                              {z[0], z[1], z[2]});
      const ad::Tensor raw = decode(tape, z_t, prev);
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
    const ad::Tensor z_all = encode(tape, demo.exploration);
    const int t = static_cast<int>(demo.exploration.size());
    const ad::Tensor z = tape.rows(z_all, t - 1, t);

    const int m = static_cast<int>(demo.skill.poses.size());
    std::vector<std::array<double, 3>> prev(m > 1 ? m - 1 : 0);
    for (int i = 0; i + 1 < m; ++i) {
      prev[i] = normalize_pose(demo.skill.poses[i], cfg_);
    }
    const ad::Tensor raw = decode(tape, z, prev);
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

  void add_linear(Rng& rng, const std::string& name, int in, int out) {
    params_.add(name + ".w", ad::xavier_uniform(in, out, rng));
    params_.add(name + ".b", ad::Tensor::zeros({out}, true));
  }

  void add_norm(const std::string& name) {
    params_.add(name + ".g", ad::Tensor::full({cfg_.d_model}, 1.0, true));
    params_.add(name + ".b", ad::Tensor::zeros({cfg_.d_model}, true));
  }

  void add_block(Rng& rng, const std::string& p) {
    const int d = cfg_.d_model;
    add_norm(p + ".ln1");
    add_linear(rng, p + ".wq", d, d);
    add_linear(rng, p + ".wk", d, d);
    add_linear(rng, p + ".wv", d, d);
    add_linear(rng, p + ".wo", d, d);
    add_norm(p + ".ln2");
    add_linear(rng, p + ".ff1", d, cfg_.d_ff);
    add_linear(rng, p + ".ff2", cfg_.d_ff, d);
  }

  void init_sigma_bias() {
    const int k = cfg_.mdn_k;
    double* b = params_.get("dec.head.b").data();
    for (int i = k + k * kPoseDim; i < mdn_raw_dim(k, kPoseDim); ++i) {
      b[i] = std::log(0.01);
    }
  }

  ad::Tensor attention(ad::Tape& tape, const ad::Tensor& x,
                       const std::string& p, const ad::Tensor& mask) {
    const int d = cfg_.d_model;
    const int dh = d / cfg_.heads;
    const ad::Tensor q = linear(tape, x, params_.get(p + ".wq.w"),
                                params_.get(p + ".wq.b"));
    const ad::Tensor k = linear(tape, x, params_.get(p + ".wk.w"),
                                params_.get(p + ".wk.b"));
    const ad::Tensor v = linear(tape, x, params_.get(p + ".wv.w"),
                                params_.get(p + ".wv.b"));
    std::vector<ad::Tensor> ctx;
    ctx.reserve(cfg_.heads);
    for (int h = 0; h < cfg_.heads; ++h) {
      const ad::Tensor qh = tape.cols(q, h * dh, (h + 1) * dh);
      const ad::Tensor kh = tape.cols(k, h * dh, (h + 1) * dh);
      const ad::Tensor vh = tape.cols(v, h * dh, (h + 1) * dh);
      ad::Tensor scores = tape.scale(tape.matmul(qh, tape.transpose(kh)),
                                     1.0 / std::sqrt(static_cast<double>(dh)));
      scores = tape.add(scores, mask);
      ctx.push_back(tape.matmul(tape.softmax(scores), vh));
    }
    return linear(tape, tape.concat_cols(ctx), params_.get(p + ".wo.w"),
                  params_.get(p + ".wo.b"));
  }

  ad::Tensor block(ad::Tape& tape, ad::Tensor x, const std::string& p,
                   const ad::Tensor& mask) {
    const ad::Tensor a = tape.layer_norm(x, params_.get(p + ".ln1.g"),
                                         params_.get(p + ".ln1.b"));
    x = tape.add(x, attention(tape, a, p, mask));
    const ad::Tensor f = tape.layer_norm(x, params_.get(p + ".ln2.g"),
                                         params_.get(p + ".ln2.b"));
    const ad::Tensor ff = linear(
        tape,
        tape.relu(linear(tape, f, params_.get(p + ".ff1.w"),
                         params_.get(p + ".ff1.b"))),
        params_.get(p + ".ff2.w"), params_.get(p + ".ff2.b"));
    return tape.add(x, ff);
  }

  // Per-step latent readout, [T, z_dim]. Causal attention makes row t a
  // function of steps 0..t only, so row t is the estimate after t+1 steps.
  ad::Tensor encode(ad::Tape& tape, const ExplorationTrajectory& exploration) {
    const int t = static_cast<int>(exploration.size());
    if (t > cfg_.max_enc_len) {
      throw std::invalid_argument("encode: history longer than max_enc_len");
    }
    ad::Tensor h = linear(tape, exploration_matrix(exploration, cfg_),
                          params_.get("enc.in.w"), params_.get("enc.in.b"));
    h = tape.add(h, tape.rows(pos_enc_, 0, t));
    const ad::Tensor mask = causal_mask(t);
    for (int l = 0; l < cfg_.enc_layers; ++l) {
      h = block(tape, h, "enc.l" + std::to_string(l), mask);
    }
    h = tape.layer_norm(h, params_.get("enc.ln_f.g"),
                        params_.get("enc.ln_f.b"));
    // Attentive readout with one learned, position-free query: every prefix
    // pools its tokens by content alone, so the readout supervised at the
    // final step is the same function applied after any number of steps.
    const ad::Tensor keys = linear(tape, h, params_.get("enc.pool.k.w"),
                                   params_.get("enc.pool.k.b"));
    const ad::Tensor vals = linear(tape, h, params_.get("enc.pool.v.w"),
                                   params_.get("enc.pool.v.b"));
    const ad::Tensor queries = tape.matmul(ad::Tensor::full({t, 1}, 1.0),
                                           params_.get("enc.pool.q"));
    ad::Tensor scores =
        tape.scale(tape.matmul(queries, tape.transpose(keys)),
                   1.0 / std::sqrt(static_cast<double>(cfg_.d_model)));
    scores = tape.add(scores, mask);
    const ad::Tensor pooled = tape.matmul(tape.softmax(scores), vals);
    return linear(tape, pooled, params_.get("enc.z.w"),
                  params_.get("enc.z.b"));
  }

  // Teacher-forcing decode: token 0 is the learned start embedding, token
  // m > 0 embeds prev[m-1]; z conditions every token. Returns the mixture
  // raw rows, [len(prev)+1, k*(1+2*kPoseDim)].
  ad::Tensor decode(ad::Tape& tape, const ad::Tensor& z,
                    const std::vector<std::array<double, 3>>& prev) {
    const int m = static_cast<int>(prev.size()) + 1;
    if (m > cfg_.max_dec_len) {
      throw std::invalid_argument("decode: plan longer than max_dec_len");
    }
    ad::Tensor tokens = params_.get("dec.start");
    if (!prev.empty()) {
      std::vector<double> data;
      data.reserve(prev.size() * 3);
      for (const auto& y : prev) data.insert(data.end(), y.begin(), y.end());
      const ad::Tensor y = ad::Tensor::from(
          {static_cast<int>(prev.size()), 3}, std::move(data));
      tokens = tape.concat_rows(
          {tokens, linear(tape, y, params_.get("dec.in.w"),
                          params_.get("dec.in.b"))});
    }
    const ad::Tensor z_cond = tape.reshape(
        linear(tape, z, params_.get("dec.z.w"), params_.get("dec.z.b")),
        {cfg_.d_model});
    ad::Tensor h = tape.add_rowvec(tokens, z_cond);
    h = tape.add(h, tape.rows(pos_dec_, 0, m));
    const ad::Tensor mask = causal_mask(m);
    for (int l = 0; l < cfg_.dec_layers; ++l) {
      h = block(tape, h, "dec.l" + std::to_string(l), mask);
    }
    h = tape.layer_norm(h, params_.get("dec.ln_f.g"),
                        params_.get("dec.ln_f.b"));
    return linear(tape, h, params_.get("dec.head.w"),
                  params_.get("dec.head.b"));
  }

  ad::Tensor pos_enc_;
  ad::Tensor pos_dec_;
};

}  // namespace

std::unique_ptr<Policy> make_transformer_policy(const ModelConfig& cfg,
                                                std::uint64_t seed) {
  return std::make_unique<TransformerPolicy>(cfg, seed);
}

}  // namespace seqtouch
