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

#include "seqtouch/tensor.hpp"

#include <numeric>
#include <stdexcept>

namespace seqtouch::ad {
namespace {

std::int64_t shape_size(const std::vector<int>& shape) {
  if (shape.empty()) throw std::invalid_argument("tensor: shape must be non-empty");
  std::int64_t n = 1;
  for (int d : shape) {
    if (d <= 0) throw std::invalid_argument("tensor: dimensions must be positive");
    n *= d;
  }
  return n;
}

}  // namespace

Tensor Tensor::zeros(std::vector<int> shape, bool requires_grad) {
  Tensor t;
  t.s_ = std::make_shared<Storage>();
  t.s_->shape = std::move(shape);
  t.s_->data.assign(shape_size(t.s_->shape), 0.0);
  t.s_->requires_grad = requires_grad;
  return t;
}

Tensor Tensor::full(std::vector<int> shape, double value, bool requires_grad) {
  Tensor t = zeros(std::move(shape), requires_grad);
  for (auto& x : t.s_->data) x = value;
  return t;
}

Tensor Tensor::from(std::vector<int> shape, std::vector<double> data,
                    bool requires_grad) {
  Tensor t;
  t.s_ = std::make_shared<Storage>();
  t.s_->shape = std::move(shape);
  if (shape_size(t.s_->shape) != static_cast<std::int64_t>(data.size())) {
    throw std::invalid_argument("tensor: data length does not match shape");
  }
  t.s_->data = std::move(data);
  t.s_->requires_grad = requires_grad;
  return t;
}

Tensor Tensor::scalar(double value, bool requires_grad) {
  return from({1}, {value}, requires_grad);
}

const std::vector<int>& Tensor::shape() const {
  if (!s_) throw std::logic_error("tensor: undefined handle");
  return s_->shape;
}

int Tensor::dim(int axis) const {
  const auto& sh = shape();
  if (axis < 0 || axis >= static_cast<int>(sh.size())) {
    throw std::out_of_range("tensor: axis out of range");
  }
  return sh[axis];
}

std::int64_t Tensor::size() const {
  if (!s_) throw std::logic_error("tensor: undefined handle");
  return static_cast<std::int64_t>(s_->data.size());
}

int Tensor::rank() const { return static_cast<int>(shape().size()); }

double* Tensor::data() const {
  if (!s_) throw std::logic_error("tensor: undefined handle");
  return s_->data.data();
}

double Tensor::at(std::int64_t i) const {
  if (i < 0 || i >= size()) throw std::out_of_range("tensor: index out of range");
  return s_->data[static_cast<std::size_t>(i)];
}

bool Tensor::requires_grad() const {
  if (!s_) throw std::logic_error("tensor: undefined handle");
  return s_->requires_grad;
}

double* Tensor::grad() const {
  if (!s_) throw std::logic_error("tensor: undefined handle");
  if (s_->grad.empty()) s_->grad.assign(s_->data.size(), 0.0);
  return s_->grad.data();
}

const double* Tensor::grad_data() const {
  if (!s_ || s_->grad.empty()) return nullptr;
  return s_->grad.data();
}

bool Tensor::has_grad() const { return s_ && !s_->grad.empty(); }

void Tensor::zero_grad() const {
  if (s_ && !s_->grad.empty()) s_->grad.assign(s_->data.size(), 0.0);
}

double Tensor::item() const {
  if (size() != 1) throw std::logic_error("tensor: item() requires a single element");
  return s_->data[0];
}

std::vector<double> Tensor::to_vector() const {
  if (!s_) throw std::logic_error("tensor: undefined handle");
  return s_->data;
}

RowsCols rows_cols(const Tensor& t) {
  const auto& sh = t.shape();
  if (sh.empty()) throw std::invalid_argument("tensor: rank-0 not supported");
  std::int64_t cols = sh.back();
  std::int64_t rows = t.size() / cols;
  return {rows, cols};
}

}  // namespace seqtouch::ad
