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

#include "seqtouch/model_config.hpp"

#include <stdexcept>

#include "json.hpp"
#include "json_keys.hpp"

namespace seqtouch {

using nlohmann::json;

std::string arch_name(ArchKind arch) {
  switch (arch) {
    case ArchKind::kTransformer:
      return "transformer";
    case ArchKind::kLstm:
      return "lstm";
    case ArchKind::kBcLstm:
      return "bc";
  }
  throw std::logic_error("unknown arch");
}

ArchKind arch_from_name(const std::string& name) {
  if (name == "transformer") return ArchKind::kTransformer;
  if (name == "lstm") return ArchKind::kLstm;
  if (name == "bc") return ArchKind::kBcLstm;
  throw std::invalid_argument("unknown arch '" + name +
                              "' (expected transformer, lstm or bc)");
}

void ModelConfig::validate() const {
  if (d_model < 1 || d_ff < 1 || enc_layers < 1 || dec_layers < 1) {
    throw std::invalid_argument("model config: non-positive layer sizes");
  }
  if (heads < 1 || d_model % heads != 0) {
    throw std::invalid_argument(
        "model config: heads must divide d_model");
  }
  if (z_dim < 1 || mdn_k < 1) {
    throw std::invalid_argument("model config: z_dim and mdn_k must be >= 1");
  }
  if (max_enc_len < 1 || max_dec_len < 1) {
    throw std::invalid_argument("model config: sequence limits must be >= 1");
  }
  if (latent_weight < 0.0) {
    throw std::invalid_argument("model config: latent_weight must be >= 0");
  }
  if (!(scale_pos > 0.0) || !(scale_ang > 0.0) || !(scale_wrench > 0.0) ||
      !(scale_vel > 0.0) || !(scale_act > 0.0)) {
    throw std::invalid_argument("model config: scales must be positive");
  }
}

ModelConfig ModelConfig::from_json_text(const std::string& text) {
  json j = json::parse(text);
  ModelConfig c;
  check_keys(j,
             {"arch", "d_model", "heads", "enc_layers", "dec_layers", "d_ff",
              "z_dim", "mdn_k", "max_enc_len", "max_dec_len",
              "latent_supervised", "latent_weight", "scales"},
             "model config");
  if (j.contains("arch")) c.arch = arch_from_name(j["arch"].get<std::string>());
  if (j.contains("d_model")) c.d_model = j["d_model"].get<int>();
  if (j.contains("heads")) c.heads = j["heads"].get<int>();
  if (j.contains("enc_layers")) c.enc_layers = j["enc_layers"].get<int>();
  if (j.contains("dec_layers")) c.dec_layers = j["dec_layers"].get<int>();
  if (j.contains("d_ff")) c.d_ff = j["d_ff"].get<int>();
  if (j.contains("z_dim")) c.z_dim = j["z_dim"].get<int>();
  if (j.contains("mdn_k")) c.mdn_k = j["mdn_k"].get<int>();
  if (j.contains("max_enc_len")) c.max_enc_len = j["max_enc_len"].get<int>();
  if (j.contains("max_dec_len")) c.max_dec_len = j["max_dec_len"].get<int>();
  if (j.contains("latent_supervised")) {
    c.latent_supervised = j["latent_supervised"].get<bool>();
  }
  if (j.contains("latent_weight")) {
    c.latent_weight = j["latent_weight"].get<double>();
  }
  if (j.contains("scales")) {
    const auto& s = j["scales"];
    check_keys(s, {"pos", "ang", "wrench", "vel", "act"}, "model config scales");
    if (s.contains("pos")) c.scale_pos = s["pos"].get<double>();
    if (s.contains("ang")) c.scale_ang = s["ang"].get<double>();
    if (s.contains("wrench")) c.scale_wrench = s["wrench"].get<double>();
    if (s.contains("vel")) c.scale_vel = s["vel"].get<double>();
    if (s.contains("act")) c.scale_act = s["act"].get<double>();
  }
  c.validate();
  return c;
}

std::string ModelConfig::to_json_text(int indent) const {
  json j;
  j["arch"] = arch_name(arch);
  j["d_model"] = d_model;
  j["heads"] = heads;
  j["enc_layers"] = enc_layers;
  j["dec_layers"] = dec_layers;
  j["d_ff"] = d_ff;
  j["z_dim"] = z_dim;
  j["mdn_k"] = mdn_k;
  j["max_enc_len"] = max_enc_len;
  j["max_dec_len"] = max_dec_len;
  j["latent_supervised"] = latent_supervised;
  j["latent_weight"] = latent_weight;
  j["scales"] = {{"pos", scale_pos},
                 {"ang", scale_ang},
                 {"wrench", scale_wrench},
                 {"vel", scale_vel},
                 {"act", scale_act}};
  return j.dump(indent);
}

}  // namespace seqtouch
