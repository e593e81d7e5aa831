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

#ifndef SEQTOUCH_TENSOR_HPP_
#define SEQTOUCH_TENSOR_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace seqtouch::ad {

// Dense n-dimensional float64 array with an optional gradient buffer.
// Tensor is a cheap handle; copies share storage. Values are written once by
// the op that produces them and treated as immutable afterwards; gradients
// accumulate (add, never overwrite) until zero_grad().
class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(std::vector<int> shape, bool requires_grad = false);
  static Tensor full(std::vector<int> shape, double value,
                     bool requires_grad = false);
  static Tensor from(std::vector<int> shape, std::vector<double> data,
                     bool requires_grad = false);
  static Tensor scalar(double value, bool requires_grad = false);

  bool defined() const { return static_cast<bool>(s_); }
  const std::vector<int>& shape() const;
  int dim(int axis) const;
  std::int64_t size() const;
  int rank() const;

  // Handles share storage, so mutators are const-qualified: they change the
  // shared buffers, not the handle.
  double* data() const;
  double at(std::int64_t i) const;

  bool requires_grad() const;
  // Allocates (zero-filled) on first use.
  double* grad() const;
  const double* grad_data() const;
  bool has_grad() const;
  void zero_grad() const;

  double item() const;  // defined for single-element tensors only

  std::vector<double> to_vector() const;

  // Identity of the underlying storage; used to detect aliasing in tests.
  const void* storage_id() const { return s_.get(); }

 private:
  struct Storage {
    std::vector<int> shape;
    std::vector<double> data;
    std::vector<double> grad;
    bool requires_grad = false;
  };
  std::shared_ptr<Storage> s_;
};

// Rows/cols view of a 2-d tensor used throughout the op kernels: an
// n-dimensional tensor is treated as (size/last_dim) rows of last_dim columns.
struct RowsCols {
  std::int64_t rows;
  std::int64_t cols;
};
RowsCols rows_cols(const Tensor& t);

}  // namespace seqtouch::ad

#endif  // SEQTOUCH_TENSOR_HPP_
