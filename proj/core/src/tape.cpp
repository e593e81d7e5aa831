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

#include "seqtouch/tape.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace seqtouch::ad {
namespace {

void check_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw std::invalid_argument(std::string(op) + ": shape mismatch");
  }
}

}  // namespace

Tensor Tape::make_output(std::vector<int> shape, bool requires_grad) {
  Tensor out = Tensor::zeros(std::move(shape), requires_grad);
  if (requires_grad) outputs_.push_back(out);
  return out;
}

// ---------------------------------------------------------------------------
// elementwise

Tensor Tape::add(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "add");
  bool rg = a.requires_grad() || b.requires_grad();
  Tensor out = make_output(a.shape(), rg);
  const double* pa = a.data();
  const double* pb = b.data();
  double* po = out.data();
  std::int64_t n = a.size();
  for (std::int64_t i = 0; i < n; ++i) po[i] = pa[i] + pb[i];
  if (rg) {
    record([a, b, out]() mutable {
      const double* g = out.grad();
      std::int64_t n = out.size();
      if (a.requires_grad()) {
        double* ga = a.grad();
        for (std::int64_t i = 0; i < n; ++i) ga[i] += g[i];
      }
      if (b.requires_grad()) {
        double* gb = b.grad();
        for (std::int64_t i = 0; i < n; ++i) gb[i] += g[i];
      }
    });
  }
  return out;
}

Tensor Tape::sub(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "sub");
  bool rg = a.requires_grad() || b.requires_grad();
  Tensor out = make_output(a.shape(), rg);
  const double* pa = a.data();
  const double* pb = b.data();
  double* po = out.data();
  std::int64_t n = a.size();
  for (std::int64_t i = 0; i < n; ++i) po[i] = pa[i] - pb[i];
  if (rg) {
    record([a, b, out]() mutable {
      const double* g = out.grad();
      std::int64_t n = out.size();
      if (a.requires_grad()) {
        double* ga = a.grad();
        for (std::int64_t i = 0; i < n; ++i) ga[i] += g[i];
      }
      if (b.requires_grad()) {
        double* gb = b.grad();
        for (std::int64_t i = 0; i < n; ++i) gb[i] -= g[i];
      }
    });
  }
  return out;
}

Tensor Tape::mul(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "mul");
  bool rg = a.requires_grad() || b.requires_grad();
  Tensor out = make_output(a.shape(), rg);
  const double* pa = a.data();
  const double* pb = b.data();
  double* po = out.data();
  std::int64_t n = a.size();
  for (std::int64_t i = 0; i < n; ++i) po[i] = pa[i] * pb[i];
  if (rg) {
    record([a, b, out]() mutable {
      const double* g = out.grad();
      std::int64_t n = out.size();
      if (a.requires_grad()) {
        double* ga = a.grad();
        const double* pb = b.data();
        for (std::int64_t i = 0; i < n; ++i) ga[i] += g[i] * pb[i];
      }
      if (b.requires_grad()) {
        double* gb = b.grad();
        const double* pa = a.data();
        for (std::int64_t i = 0; i < n; ++i) gb[i] += g[i] * pa[i];
      }
    });
  }
  return out;
}

Tensor Tape::div(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "div");
  bool rg = a.requires_grad() || b.requires_grad();
  Tensor out = make_output(a.shape(), rg);
  const double* pa = a.data();
  const double* pb = b.data();
  double* po = out.data();
  std::int64_t n = a.size();
  for (std::int64_t i = 0; i < n; ++i) po[i] = pa[i] / pb[i];
  if (rg) {
    record([a, b, out]() mutable {
      const double* g = out.grad();
      const double* pb = b.data();
      const double* po = out.data();
      std::int64_t n = out.size();
      if (a.requires_grad()) {
        double* ga = a.grad();
        for (std::int64_t i = 0; i < n; ++i) ga[i] += g[i] / pb[i];
      }
      if (b.requires_grad()) {
        double* gb = b.grad();
        for (std::int64_t i = 0; i < n; ++i) gb[i] -= g[i] * po[i] / pb[i];
      }
    });
  }
  return out;
}

Tensor Tape::scale(const Tensor& a, double c) {
  bool rg = a.requires_grad();
  Tensor out = make_output(a.shape(), rg);
  const double* pa = a.data();
  double* po = out.data();
  std::int64_t n = a.size();
  for (std::int64_t i = 0; i < n; ++i) po[i] = pa[i] * c;
  if (rg) {
    record([a, out, c]() mutable {
      const double* g = out.grad();
      double* ga = a.grad();
      std::int64_t n = out.size();
      for (std::int64_t i = 0; i < n; ++i) ga[i] += g[i] * c;
    });
  }
  return out;
}

Tensor Tape::add_scalar(const Tensor& a, double c) {
  bool rg = a.requires_grad();
  Tensor out = make_output(a.shape(), rg);
  const double* pa = a.data();
  double* po = out.data();
  std::int64_t n = a.size();
  for (std::int64_t i = 0; i < n; ++i) po[i] = pa[i] + c;
  if (rg) {
    record([a, out]() mutable {
      const double* g = out.grad();
      double* ga = a.grad();
      std::int64_t n = out.size();
      for (std::int64_t i = 0; i < n; ++i) ga[i] += g[i];
    });
  }
  return out;
}

Tensor Tape::add_rowvec(const Tensor& x, const Tensor& v) {
  auto rc = rows_cols(x);
  if (v.rank() != 1 || v.dim(0) != rc.cols) {
    throw std::invalid_argument("add_rowvec: vector length must equal last dim");
  }
  bool rg = x.requires_grad() || v.requires_grad();
  Tensor out = make_output(x.shape(), rg);
  const double* px = x.data();
  const double* pv = v.data();
  double* po = out.data();
  for (std::int64_t r = 0; r < rc.rows; ++r) {
    for (std::int64_t c = 0; c < rc.cols; ++c) {
      po[r * rc.cols + c] = px[r * rc.cols + c] + pv[c];
    }
  }
  if (rg) {
    record([x, v, out, rc]() mutable {
      const double* g = out.grad();
      if (x.requires_grad()) {
        double* gx = x.grad();
        std::int64_t n = out.size();
        for (std::int64_t i = 0; i < n; ++i) gx[i] += g[i];
      }
      if (v.requires_grad()) {
        double* gv = v.grad();
        for (std::int64_t r = 0; r < rc.rows; ++r) {
          for (std::int64_t c = 0; c < rc.cols; ++c) {
            gv[c] += g[r * rc.cols + c];
          }
        }
      }
    });
  }
  return out;
}

namespace {

template <typename Fwd, typename Bwd>
Tensor unary_op(Tape* tape, const Tensor& a, Fwd fwd, Bwd bwd,
                std::vector<std::function<void()>>* records) {
  (void)tape;
  bool rg = a.requires_grad();
  Tensor out = Tensor::zeros(a.shape(), rg);
  const double* pa = a.data();
  double* po = out.data();
  std::int64_t n = a.size();
  for (std::int64_t i = 0; i < n; ++i) po[i] = fwd(pa[i]);
  if (rg) {
    records->push_back([a, out, bwd]() mutable {
      const double* g = out.grad();
      const double* px = a.data();
      const double* py = out.data();
      double* ga = a.grad();
      std::int64_t n = out.size();
      for (std::int64_t i = 0; i < n; ++i) ga[i] += g[i] * bwd(px[i], py[i]);
    });
  }
  return out;
}

}  // namespace

Tensor Tape::tanh(const Tensor& a) {
  return unary_op(
      this, a, [](double x) { return std::tanh(x); },
      [](double, double y) { return 1.0 - y * y; }, &records_);
}

Tensor Tape::sigmoid(const Tensor& a) {
  return unary_op(
      this, a,
      [](double x) {
        if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
        double e = std::exp(x);
        return e / (1.0 + e);
      },
      [](double, double y) { return y * (1.0 - y); }, &records_);
}

Tensor Tape::relu(const Tensor& a) {
  return unary_op(
      this, a, [](double x) { return x > 0.0 ? x : 0.0; },
      [](double x, double) { return x > 0.0 ? 1.0 : 0.0; }, &records_);
}

Tensor Tape::exp(const Tensor& a) {
  return unary_op(
      this, a, [](double x) { return std::exp(x); },
      [](double, double y) { return y; }, &records_);
}

Tensor Tape::log(const Tensor& a) {
  const double* pa = a.data();
  std::int64_t n = a.size();
  for (std::int64_t i = 0; i < n; ++i) {
    if (!(pa[i] > 0.0)) throw std::domain_error("log: input must be positive");
  }
  return unary_op(
      this, a, [](double x) { return std::log(x); },
      [](double x, double) { return 1.0 / x; }, &records_);
}

// ---------------------------------------------------------------------------
// matrix ops

Tensor Tape::matmul(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.dim(1) != b.dim(0)) {
    throw std::invalid_argument("matmul: requires [m,k] x [k,n]");
  }
  std::int64_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
  bool rg = a.requires_grad() || b.requires_grad();
  Tensor out = make_output({static_cast<int>(m), static_cast<int>(n)}, rg);
  const double* pa = a.data();
  const double* pb = b.data();
  double* po = out.data();
  for (std::int64_t i = 0; i < m; ++i) {
    const double* arow = pa + i * k;
    double* orow = po + i * n;
    for (std::int64_t p = 0; p < k; ++p) {
      double av = arow[p];
      if (av == 0.0) continue;
      const double* brow = pb + p * n;
      for (std::int64_t j = 0; j < n; ++j) orow[j] += av * brow[j];
    }
  }
  if (rg) {
    record([a, b, out, m, k, n]() mutable {
      const double* g = out.grad();
      if (a.requires_grad()) {
        // dA = dC * B^T
        double* ga = a.grad();
        const double* pb = b.data();
        for (std::int64_t i = 0; i < m; ++i) {
          const double* grow = g + i * n;
          double* garow = ga + i * k;
          for (std::int64_t p = 0; p < k; ++p) {
            const double* brow = pb + p * n;
            double acc = 0.0;
            for (std::int64_t j = 0; j < n; ++j) acc += grow[j] * brow[j];
            garow[p] += acc;
          }
        }
      }
      if (b.requires_grad()) {
        // dB = A^T * dC
        double* gb = b.grad();
        const double* pa = a.data();
        for (std::int64_t i = 0; i < m; ++i) {
          const double* arow = pa + i * k;
          const double* grow = g + i * n;
          for (std::int64_t p = 0; p < k; ++p) {
            double av = arow[p];
            if (av == 0.0) continue;
            double* gbrow = gb + p * n;
            for (std::int64_t j = 0; j < n; ++j) gbrow[j] += av * grow[j];
          }
        }
      }
    });
  }
  return out;
}

Tensor Tape::transpose(const Tensor& a) {
  if (a.rank() != 2) throw std::invalid_argument("transpose: rank-2 only");
  std::int64_t m = a.dim(0), n = a.dim(1);
  bool rg = a.requires_grad();
  Tensor out = make_output({static_cast<int>(n), static_cast<int>(m)}, rg);
  const double* pa = a.data();
  double* po = out.data();
  for (std::int64_t i = 0; i < m; ++i) {
    for (std::int64_t j = 0; j < n; ++j) po[j * m + i] = pa[i * n + j];
  }
  if (rg) {
    record([a, out, m, n]() mutable {
      const double* g = out.grad();
      double* ga = a.grad();
      for (std::int64_t i = 0; i < m; ++i) {
        for (std::int64_t j = 0; j < n; ++j) ga[i * n + j] += g[j * m + i];
      }
    });
  }
  return out;
}

Tensor Tape::rows(const Tensor& a, int r0, int r1) {
  if (a.rank() != 2) throw std::invalid_argument("rows: rank-2 only");
  std::int64_t m = a.dim(0), n = a.dim(1);
  if (r0 < 0 || r1 > m || r0 >= r1) throw std::invalid_argument("rows: bad range");
  bool rg = a.requires_grad();
  Tensor out = make_output({r1 - r0, static_cast<int>(n)}, rg);
  const double* pa = a.data();
  double* po = out.data();
  std::copy(pa + r0 * n, pa + r1 * n, po);
  if (rg) {
    record([a, out, r0, n]() mutable {
      const double* g = out.grad();
      double* ga = a.grad();
      std::int64_t len = out.size();
      for (std::int64_t i = 0; i < len; ++i) ga[r0 * n + i] += g[i];
    });
  }
  return out;
}

Tensor Tape::cols(const Tensor& a, int c0, int c1) {
  if (a.rank() != 2) throw std::invalid_argument("cols: rank-2 only");
  std::int64_t m = a.dim(0), n = a.dim(1);
  if (c0 < 0 || c1 > n || c0 >= c1) throw std::invalid_argument("cols: bad range");
  std::int64_t w = c1 - c0;
  bool rg = a.requires_grad();
  Tensor out = make_output({static_cast<int>(m), static_cast<int>(w)}, rg);
  const double* pa = a.data();
  double* po = out.data();
  for (std::int64_t i = 0; i < m; ++i) {
    std::copy(pa + i * n + c0, pa + i * n + c1, po + i * w);
  }
  if (rg) {
    record([a, out, c0, n, w, m]() mutable {
      const double* g = out.grad();
      double* ga = a.grad();
      for (std::int64_t i = 0; i < m; ++i) {
        for (std::int64_t j = 0; j < w; ++j) ga[i * n + c0 + j] += g[i * w + j];
      }
    });
  }
  return out;
}

Tensor Tape::concat_rows(const std::vector<Tensor>& parts) {
  if (parts.empty()) throw std::invalid_argument("concat_rows: empty input");
  std::int64_t n = parts[0].dim(1);
  std::int64_t m = 0;
  bool rg = false;
  for (const auto& p : parts) {
    if (p.rank() != 2 || p.dim(1) != n) {
      throw std::invalid_argument("concat_rows: column mismatch");
    }
    m += p.dim(0);
    rg = rg || p.requires_grad();
  }
  Tensor out = make_output({static_cast<int>(m), static_cast<int>(n)}, rg);
  double* po = out.data();
  std::int64_t off = 0;
  for (const auto& p : parts) {
    std::copy(p.data(), p.data() + p.size(), po + off);
    off += p.size();
  }
  if (rg) {
    record([parts, out]() mutable {
      const double* g = out.grad();
      std::int64_t off = 0;
      for (auto& p : parts) {
        if (p.requires_grad()) {
          double* gp = p.grad();
          for (std::int64_t i = 0; i < p.size(); ++i) gp[i] += g[off + i];
        }
        off += p.size();
      }
    });
  }
  return out;
}

Tensor Tape::concat_cols(const std::vector<Tensor>& parts) {
  if (parts.empty()) throw std::invalid_argument("concat_cols: empty input");
  std::int64_t m = parts[0].dim(0);
  std::int64_t n = 0;
  bool rg = false;
  for (const auto& p : parts) {
    if (p.rank() != 2 || p.dim(0) != m) {
      throw std::invalid_argument("concat_cols: row mismatch");
    }
    n += p.dim(1);
    rg = rg || p.requires_grad();
  }
  Tensor out = make_output({static_cast<int>(m), static_cast<int>(n)}, rg);
  double* po = out.data();
  std::int64_t coff = 0;
  for (const auto& p : parts) {
    std::int64_t w = p.dim(1);
    const double* pp = p.data();
    for (std::int64_t i = 0; i < m; ++i) {
      std::copy(pp + i * w, pp + (i + 1) * w, po + i * n + coff);
    }
    coff += w;
  }
  if (rg) {
    record([parts, out, m, n]() mutable {
      const double* g = out.grad();
      std::int64_t coff = 0;
      for (auto& p : parts) {
        std::int64_t w = p.dim(1);
        if (p.requires_grad()) {
          double* gp = p.grad();
          for (std::int64_t i = 0; i < m; ++i) {
            for (std::int64_t j = 0; j < w; ++j) {
              gp[i * w + j] += g[i * n + coff + j];
            }
          }
        }
        coff += w;
      }
    });
  }
  return out;
}

Tensor Tape::reshape(const Tensor& a, std::vector<int> shape) {
  Tensor out = make_output(shape, a.requires_grad());
  if (out.size() != a.size()) throw std::invalid_argument("reshape: size mismatch");
  std::copy(a.data(), a.data() + a.size(), out.data());
  if (a.requires_grad()) {
    record([a, out]() mutable {
      const double* g = out.grad();
      double* ga = a.grad();
      for (std::int64_t i = 0; i < a.size(); ++i) ga[i] += g[i];
    });
  }
  return out;
}

// ---------------------------------------------------------------------------
// last-axis reductions

Tensor Tape::softmax(const Tensor& a) {
  auto rc = rows_cols(a);
  bool rg = a.requires_grad();
  Tensor out = make_output(a.shape(), rg);
  const double* pa = a.data();
  double* po = out.data();
  for (std::int64_t r = 0; r < rc.rows; ++r) {
    const double* x = pa + r * rc.cols;
    double* y = po + r * rc.cols;
    double m = x[0];
    for (std::int64_t c = 1; c < rc.cols; ++c) m = std::max(m, x[c]);
    double s = 0.0;
    for (std::int64_t c = 0; c < rc.cols; ++c) {
      y[c] = std::exp(x[c] - m);
      s += y[c];
    }
    for (std::int64_t c = 0; c < rc.cols; ++c) y[c] /= s;
  }
  if (rg) {
    record([a, out, rc]() mutable {
      const double* g = out.grad();
      const double* y = out.data();
      double* ga = a.grad();
      for (std::int64_t r = 0; r < rc.rows; ++r) {
        const double* gr = g + r * rc.cols;
        const double* yr = y + r * rc.cols;
        double dot = 0.0;
        for (std::int64_t c = 0; c < rc.cols; ++c) dot += gr[c] * yr[c];
        double* gar = ga + r * rc.cols;
        for (std::int64_t c = 0; c < rc.cols; ++c) {
          gar[c] += yr[c] * (gr[c] - dot);
        }
      }
    });
  }
  return out;
}

Tensor Tape::log_softmax(const Tensor& a) {
  auto rc = rows_cols(a);
  bool rg = a.requires_grad();
  Tensor out = make_output(a.shape(), rg);
  const double* pa = a.data();
  double* po = out.data();
  for (std::int64_t r = 0; r < rc.rows; ++r) {
    const double* x = pa + r * rc.cols;
    double* y = po + r * rc.cols;
    double m = x[0];
    for (std::int64_t c = 1; c < rc.cols; ++c) m = std::max(m, x[c]);
    double s = 0.0;
    for (std::int64_t c = 0; c < rc.cols; ++c) s += std::exp(x[c] - m);
    double lse = m + std::log(s);
    for (std::int64_t c = 0; c < rc.cols; ++c) y[c] = x[c] - lse;
  }
  if (rg) {
    record([a, out, rc]() mutable {
      const double* g = out.grad();
      const double* y = out.data();
      double* ga = a.grad();
      for (std::int64_t r = 0; r < rc.rows; ++r) {
        const double* gr = g + r * rc.cols;
        const double* yr = y + r * rc.cols;
        double gsum = 0.0;
        for (std::int64_t c = 0; c < rc.cols; ++c) gsum += gr[c];
        double* gar = ga + r * rc.cols;
        for (std::int64_t c = 0; c < rc.cols; ++c) {
          gar[c] += gr[c] - std::exp(yr[c]) * gsum;
        }
      }
    });
  }
  return out;
}

Tensor Tape::logsumexp(const Tensor& a) {
  auto rc = rows_cols(a);
  std::vector<int> oshape = a.shape();
  oshape.back() = 1;
  bool rg = a.requires_grad();
  Tensor out = make_output(oshape, rg);
  const double* pa = a.data();
  double* po = out.data();
  for (std::int64_t r = 0; r < rc.rows; ++r) {
    const double* x = pa + r * rc.cols;
    double m = x[0];
    for (std::int64_t c = 1; c < rc.cols; ++c) m = std::max(m, x[c]);
    double s = 0.0;
    for (std::int64_t c = 0; c < rc.cols; ++c) s += std::exp(x[c] - m);
    po[r] = m + std::log(s);
  }
  if (rg) {
    record([a, out, rc]() mutable {
      const double* g = out.grad();
      const double* pa = a.data();
      const double* po = out.data();
      double* ga = a.grad();
      for (std::int64_t r = 0; r < rc.rows; ++r) {
        const double* x = pa + r * rc.cols;
        double* gar = ga + r * rc.cols;
        for (std::int64_t c = 0; c < rc.cols; ++c) {
          gar[c] += g[r] * std::exp(x[c] - po[r]);
        }
      }
    });
  }
  return out;
}

Tensor Tape::sum_rows(const Tensor& a) {
  auto rc = rows_cols(a);
  std::vector<int> oshape = a.shape();
  oshape.back() = 1;
  bool rg = a.requires_grad();
  Tensor out = make_output(oshape, rg);
  const double* pa = a.data();
  double* po = out.data();
  for (std::int64_t r = 0; r < rc.rows; ++r) {
    double s = 0.0;
    for (std::int64_t c = 0; c < rc.cols; ++c) s += pa[r * rc.cols + c];
    po[r] = s;
  }
  if (rg) {
    record([a, out, rc]() mutable {
      const double* g = out.grad();
      double* ga = a.grad();
      for (std::int64_t r = 0; r < rc.rows; ++r) {
        for (std::int64_t c = 0; c < rc.cols; ++c) ga[r * rc.cols + c] += g[r];
      }
    });
  }
  return out;
}

Tensor Tape::sum_all(const Tensor& a) {
  bool rg = a.requires_grad();
  Tensor out = make_output({1}, rg);
  const double* pa = a.data();
  double s = 0.0;
  std::int64_t n = a.size();
  for (std::int64_t i = 0; i < n; ++i) s += pa[i];
  out.data()[0] = s;
  if (rg) {
    record([a, out]() mutable {
      double g = out.grad()[0];
      double* ga = a.grad();
      std::int64_t n = a.size();
      for (std::int64_t i = 0; i < n; ++i) ga[i] += g;
    });
  }
  return out;
}

Tensor Tape::mean_all(const Tensor& a) {
  return scale(sum_all(a), 1.0 / static_cast<double>(a.size()));
}

Tensor Tape::layer_norm(const Tensor& x, const Tensor& gain, const Tensor& bias,
                        double eps) {
  auto rc = rows_cols(x);
  if (gain.rank() != 1 || gain.dim(0) != rc.cols || bias.rank() != 1 ||
      bias.dim(0) != rc.cols) {
    throw std::invalid_argument("layer_norm: gain/bias must be [last_dim]");
  }
  bool rg = x.requires_grad() || gain.requires_grad() || bias.requires_grad();
  Tensor out = make_output(x.shape(), rg);
  // xhat is kept for the backward pass.
  Tensor xhat = Tensor::zeros(x.shape());
  Tensor inv_std = Tensor::zeros({static_cast<int>(rc.rows)});
  const double* px = x.data();
  const double* pg = gain.data();
  const double* pb = bias.data();
  double* po = out.data();
  double* ph = xhat.data();
  double* pis = inv_std.data();
  for (std::int64_t r = 0; r < rc.rows; ++r) {
    const double* xr = px + r * rc.cols;
    double mu = 0.0;
    for (std::int64_t c = 0; c < rc.cols; ++c) mu += xr[c];
    mu /= static_cast<double>(rc.cols);
    double var = 0.0;
    for (std::int64_t c = 0; c < rc.cols; ++c) {
      double d = xr[c] - mu;
      var += d * d;
    }
    var /= static_cast<double>(rc.cols);
    double is = 1.0 / std::sqrt(var + eps);
    pis[r] = is;
    for (std::int64_t c = 0; c < rc.cols; ++c) {
      double h = (xr[c] - mu) * is;
      ph[r * rc.cols + c] = h;
      po[r * rc.cols + c] = pg[c] * h + pb[c];
    }
  }
  if (rg) {
    record([x, gain, bias, out, xhat, inv_std, rc]() mutable {
      const double* g = out.grad();
      const double* ph = xhat.data();
      const double* pis = inv_std.data();
      const double* pg = gain.data();
      double nf = static_cast<double>(rc.cols);
      if (gain.requires_grad()) {
        double* gg = gain.grad();
        for (std::int64_t r = 0; r < rc.rows; ++r) {
          for (std::int64_t c = 0; c < rc.cols; ++c) {
            gg[c] += g[r * rc.cols + c] * ph[r * rc.cols + c];
          }
        }
      }
      if (bias.requires_grad()) {
        double* gb = bias.grad();
        for (std::int64_t r = 0; r < rc.rows; ++r) {
          for (std::int64_t c = 0; c < rc.cols; ++c) gb[c] += g[r * rc.cols + c];
        }
      }
      if (x.requires_grad()) {
        double* gx = x.grad();
        for (std::int64_t r = 0; r < rc.rows; ++r) {
          const double* gr = g + r * rc.cols;
          const double* hr = ph + r * rc.cols;
          double sum_dh = 0.0, sum_dh_h = 0.0;
          for (std::int64_t c = 0; c < rc.cols; ++c) {
            double dh = gr[c] * pg[c];
            sum_dh += dh;
            sum_dh_h += dh * hr[c];
          }
          double* gxr = gx + r * rc.cols;
          for (std::int64_t c = 0; c < rc.cols; ++c) {
            double dh = gr[c] * pg[c];
            gxr[c] += pis[r] * (dh - sum_dh / nf - hr[c] * sum_dh_h / nf);
          }
        }
      }
    });
  }
  return out;
}

void Tape::backward(const Tensor& loss) {
  if (!loss.defined() || loss.size() != 1) {
    throw std::invalid_argument("backward: loss must be a single-element tensor");
  }
  for (const Tensor& out : outputs_) out.zero_grad();
  Tensor seed = loss;
  seed.grad()[0] += 1.0;
  for (auto it = records_.rbegin(); it != records_.rend(); ++it) (*it)();
}

}  // namespace seqtouch::ad
