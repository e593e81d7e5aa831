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

#ifndef SEQTOUCH_TAPE_HPP_
#define SEQTOUCH_TAPE_HPP_

#include <functional>
#include <vector>

#include "seqtouch/tensor.hpp"

namespace seqtouch::ad {

// Reverse-mode tape. Each op computes its value eagerly and appends one
// backward record; backward(loss) walks the records in exact reverse
// construction order, accumulating into .grad buffers. A tape belongs to a
// single forward pass on a single thread; call clear() (or use a fresh Tape)
// between training steps. Parameters are ordinary leaf tensors that outlive
// the tape, so their gradients persist across clear() until zero_grad().
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // --- binary elementwise (shapes must match exactly) ---
  Tensor add(const Tensor& a, const Tensor& b);
  Tensor sub(const Tensor& a, const Tensor& b);
  Tensor mul(const Tensor& a, const Tensor& b);
  Tensor div(const Tensor& a, const Tensor& b);

  // --- scalar broadcast ---
  Tensor scale(const Tensor& a, double c);
  Tensor add_scalar(const Tensor& a, double c);

  // Broadcast a length-[cols] vector across the leading (row) dimensions.
  Tensor add_rowvec(const Tensor& x, const Tensor& v);

  // --- unary elementwise ---
  Tensor tanh(const Tensor& a);
  Tensor sigmoid(const Tensor& a);
  Tensor relu(const Tensor& a);
  Tensor exp(const Tensor& a);
  Tensor log(const Tensor& a);  // throws std::domain_error on x <= 0

  // --- matrix ops (rank-2 operands) ---
  Tensor matmul(const Tensor& a, const Tensor& b);
  Tensor transpose(const Tensor& a);
  Tensor rows(const Tensor& a, int r0, int r1);
  Tensor cols(const Tensor& a, int c0, int c1);
  Tensor concat_rows(const std::vector<Tensor>& parts);
  Tensor concat_cols(const std::vector<Tensor>& parts);

  // --- shape ---
  Tensor reshape(const Tensor& a, std::vector<int> shape);

  // --- last-axis reductions / normalizations ---
  Tensor softmax(const Tensor& a);      // rows sum to 1
  Tensor log_softmax(const Tensor& a);
  Tensor logsumexp(const Tensor& a);    // last dim collapses to 1
  Tensor sum_rows(const Tensor& a);     // last dim collapses to 1
  Tensor sum_all(const Tensor& a);      // scalar
  Tensor mean_all(const Tensor& a);     // scalar
  Tensor layer_norm(const Tensor& x, const Tensor& gain, const Tensor& bias,
                    double eps = 1e-6);

  // Zeros the gradients of every tensor this tape produced, seeds
  // d(loss)/d(loss) = 1 and runs all recorded backward steps in reverse.
  // The loss must be a single-element tensor. Leaf gradients accumulate one
  // full pass per call.
  void backward(const Tensor& loss);

  void clear() {
    records_.clear();
    outputs_.clear();
  }
  std::size_t num_records() const { return records_.size(); }

 private:
  Tensor make_output(std::vector<int> shape, bool requires_grad);
  void record(std::function<void()> fn) { records_.push_back(std::move(fn)); }

  std::vector<std::function<void()>> records_;
  std::vector<Tensor> outputs_;
};

}  // namespace seqtouch::ad

#endif  // SEQTOUCH_TAPE_HPP_
