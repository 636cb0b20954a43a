// Copyright (c) 2026 rawnet3-cpp project contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RAWNET3_TENSOR_HPP_
#define RAWNET3_TENSOR_HPP_

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <string>
#include <vector>

#include "rawnet3/common.hpp"
#include "rawnet3/rng.hpp"

namespace rawnet3 {

// Dense row-major tensor. Feature maps are rank-3 (batch, channels, frames),
// parameter matrices rank-2, per-channel vectors rank-1, loss values rank-0
// (a single element). Values are float for training speed or double for the
// finite-difference oracles; both instantiations share all code.
template <typename S>
struct Tensor {
  std::vector<int64_t> shape;
  std::vector<S> v;

  Tensor() = default;
  explicit Tensor(std::vector<int64_t> sh) : shape(std::move(sh)) {
    v.assign(static_cast<size_t>(count(shape)), S(0));
  }
  Tensor(std::vector<int64_t> sh, std::vector<S> data)
      : shape(std::move(sh)), v(std::move(data)) {
    RAWNET3_CHECK(static_cast<int64_t>(v.size()) == count(shape),
                  "tensor data size does not match shape");
  }

  static int64_t count(const std::vector<int64_t>& sh) {
    int64_t n = 1;
    for (int64_t d : sh) {
      RAWNET3_CHECK(d >= 0, "negative extent");
      n *= d;
    }
    return n;
  }

  static Tensor zeros(std::vector<int64_t> sh) { return Tensor(std::move(sh)); }
  static Tensor full(std::vector<int64_t> sh, S value) {
    Tensor t(std::move(sh));
    std::fill(t.v.begin(), t.v.end(), value);
    return t;
  }
  static Tensor scalar(S value) {
    Tensor t;
    t.shape = {};
    t.v = {value};
    return t;
  }
  static Tensor randn(std::vector<int64_t> sh, Rng& rng, double stddev = 1.0) {
    Tensor t(std::move(sh));
    for (S& x : t.v) x = static_cast<S>(rng.normal() * stddev);
    return t;
  }

  int64_t numel() const { return static_cast<int64_t>(v.size()); }
  int rank() const { return static_cast<int>(shape.size()); }
  int64_t dim(int i) const { return shape[static_cast<size_t>(i)]; }

  bool same_shape(const Tensor& o) const { return shape == o.shape; }

  // Rank-3 (N, C, T) accessors.
  S& at(int64_t n, int64_t c, int64_t t) {
    return v[static_cast<size_t>((n * shape[1] + c) * shape[2] + t)];
  }
  S at(int64_t n, int64_t c, int64_t t) const {
    return v[static_cast<size_t>((n * shape[1] + c) * shape[2] + t)];
  }
  // Rank-2 (R, C) accessors.
  S& at(int64_t r, int64_t c) {
    return v[static_cast<size_t>(r * shape[1] + c)];
  }
  S at(int64_t r, int64_t c) const {
    return v[static_cast<size_t>(r * shape[1] + c)];
  }

  S item() const {
    RAWNET3_CHECK(v.size() == 1, "item() on non-scalar tensor");
    return v[0];
  }

  bool all_finite() const {
    for (S x : v) {
      if (!std::isfinite(static_cast<double>(x))) return false;
    }
    return true;
  }

  void release() {
    v.clear();
    v.shrink_to_fit();
  }

  std::string shape_str() const {
    std::string s = "(";
    for (size_t i = 0; i < shape.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(shape[i]);
    }
    return s + ")";
  }
};

// A named learnable (or buffer) tensor with its gradient accumulator.
// BatchNorm running statistics are Params with trainable=false: they ride
// along in checkpoints and EMA updates but receive no optimizer steps.
template <typename S>
struct Param {
  std::string name;
  Tensor<S> value;
  Tensor<S> grad;  // empty until a backward pass touches it
  bool trainable = true;

  void ensure_grad() {
    if (grad.v.empty()) {
      grad = Tensor<S>::zeros(value.shape);
    }
    RAWNET3_CHECK(grad.shape == value.shape, "grad/value shape mismatch on ",
                  name);
  }
  void zero_grad() {
    grad.shape.clear();
    grad.release();
  }
};

}  // namespace rawnet3

#endif  // RAWNET3_TENSOR_HPP_
