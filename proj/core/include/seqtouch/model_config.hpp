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

#ifndef SEQTOUCH_MODEL_CONFIG_HPP_
#define SEQTOUCH_MODEL_CONFIG_HPP_

#include <string>

namespace seqtouch {

enum class ArchKind {
  kTransformer,  // seq2seq, causal attention both sides
  kLstm,         // seq2seq, recurrent encoder and decoder
  kBcLstm,       // single recurrent stream, no latent bottleneck
};

std::string arch_name(ArchKind arch);
ArchKind arch_from_name(const std::string& name);

struct ModelConfig {
  ArchKind arch = ArchKind::kTransformer;

  int d_model = 64;
  int heads = 4;
  int enc_layers = 2;
  int dec_layers = 2;
  int d_ff = 128;

  int z_dim = 3;        // latent bottleneck between encoder and decoder
  int mdn_k = 5;        // mixture components per via point
  int max_enc_len = 48; // exploration steps
  int max_dec_len = 12; // via points

  // Adds latent_weight * |z_T - normalized hidden pose|^2 to the loss.
  bool latent_supervised = false;
  double latent_weight = 1.0;

  // Normalization scales applied to every network input and output.
  double scale_pos = 0.15;
  double scale_ang = 0.26;
  double scale_wrench = 2.0;
  double scale_vel = 0.1;
  double scale_act = 0.01;

  void validate() const;

  static ModelConfig from_json_text(const std::string& text);
  std::string to_json_text(int indent = 2) const;
};

}  // namespace seqtouch

#endif  // SEQTOUCH_MODEL_CONFIG_HPP_
