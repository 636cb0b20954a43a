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

#ifndef RAWNET3_TAPE_HPP_
#define RAWNET3_TAPE_HPP_

#include <functional>
#include <utility>
#include <vector>

#include "rawnet3/tensor.hpp"

namespace rawnet3 {

// Reverse-mode tape. Ops append nodes during the forward pass; backward()
// sweeps the nodes in reverse creation order (a valid topological order,
// since inputs always precede their consumers) and frees value and gradient
// buffers as soon as they can no longer be read, which keeps the peak
// footprint close to the forward activations alone.
//
// Leaf kinds:
//   param(p)     - gradients accumulate directly into p.grad.
//   constant(t)  - owned value, no gradient (explicit stop-gradient).
//   constant_ref(&t) - borrowed value (e.g. teacher weights), no gradient.
template <typename S>
class Tape {
 public:
  using BackFn = std::function<void(Tape&, int self)>;

  int param(Param<S>& p) {
    Node n;
    n.param = &p;
    n.needs_grad = p.trainable;
    return push(std::move(n));
  }

  int constant(Tensor<S> t) {
    Node n;
    n.value = std::move(t);
    return push(std::move(n));
  }

  int constant_ref(const Tensor<S>* t) {
    Node n;
    n.ext_value = t;
    return push(std::move(n));
  }

  int node(Tensor<S> value, std::vector<int> parents, BackFn back) {
    Node n;
    n.value = std::move(value);
    bool ng = false;
    for (int pid : parents) ng = ng || nodes_[static_cast<size_t>(pid)].needs_grad;
    n.needs_grad = ng;
    if (ng) n.back = std::move(back);
    return push(std::move(n));
  }

  const Tensor<S>& val(int id) const {
    const Node& n = nodes_[static_cast<size_t>(id)];
    if (n.param) return n.param->value;
    if (n.ext_value) return *n.ext_value;
    return n.value;
  }

  bool needs_grad(int id) const {
    return nodes_[static_cast<size_t>(id)].needs_grad;
  }

  // Accumulation target for a node's gradient; nullptr when no gradient is
  // required, so backward kernels can skip whole terms.
  Tensor<S>* grad_acc(int id) {
    Node& n = nodes_[static_cast<size_t>(id)];
    if (!n.needs_grad) return nullptr;
    if (n.param) {
      n.param->ensure_grad();
      n.has_grad = true;
      return &n.param->grad;
    }
    if (!n.has_grad) {
      n.grad = Tensor<S>::zeros(val(id).shape);
      n.has_grad = true;
    }
    return &n.grad;
  }

  // Gradient of a node during the backward sweep (valid inside BackFns).
  const Tensor<S>& grad(int id) const {
    const Node& n = nodes_[static_cast<size_t>(id)];
    if (n.param) return n.param->grad;
    return n.grad;
  }

  // Reverse sweep from a scalar root. Node values and gradients are released
  // as soon as the sweep passes them; parameter gradients persist in their
  // Param and accumulate across multiple backward() calls.
  void backward(int root) {
    RAWNET3_CHECK(val(root).numel() == 1, "backward root must be scalar");
    {
      Tensor<S>* g = grad_acc(root);
      RAWNET3_CHECK(g != nullptr, "backward root does not depend on any parameter");
      g->v[0] = S(1);
    }
    for (int i = root; i >= 0; --i) {
      Node& n = nodes_[static_cast<size_t>(i)];
      if (n.needs_grad && n.has_grad && n.back) n.back(*this, i);
      if (!n.param) {
        n.value.release();
        n.grad.release();
        n.has_grad = false;
      }
    }
  }

  void reset() { nodes_.clear(); }
  size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor<S> value;
    const Tensor<S>* ext_value = nullptr;
    Param<S>* param = nullptr;
    Tensor<S> grad;
    bool needs_grad = false;
    bool has_grad = false;
    BackFn back;
  };

  int push(Node n) {
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
  }

  std::vector<Node> nodes_;
};

}  // namespace rawnet3

#endif  // RAWNET3_TAPE_HPP_
