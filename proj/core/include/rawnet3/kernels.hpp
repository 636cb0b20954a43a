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

#ifndef RAWNET3_KERNELS_HPP_
#define RAWNET3_KERNELS_HPP_

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "rawnet3/tensor.hpp"

namespace rawnet3 {

struct ConvSpec {
  int stride = 1;
  int dilation = 1;
  int pad = 0;  // symmetric zero pad; 0 = valid convolution
};

inline int64_t conv_out_len(int64_t t, int64_t k, const ConvSpec& cs) {
  const int64_t span = (k - 1) * cs.dilation + 1;
  const int64_t te = t + 2 * cs.pad;
  if (te < span) return 0;
  return (te - span) / cs.stride + 1;
}

// Forward/backward compute routines. All feature maps are (N, C, T)
// row-major; correlation convention (no kernel flip). Backward kernels
// accumulate into the provided buffers and skip null ones.
namespace kernels {

template <typename S>
using MatR = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename S>
using MapR = Eigen::Map<MatR<S>>;
template <typename S>
using CMapR = Eigen::Map<const MatR<S>>;

namespace detail {

// Gathers one batch element into a (C_in*k, T') patch matrix.
template <typename S>
void im2col(const S* x, int64_t c_in, int64_t t_in, int64_t k,
            const ConvSpec& cs, int64_t t_out, S* col) {
  for (int64_t ci = 0; ci < c_in; ++ci) {
    const S* xc = x + ci * t_in;
    for (int64_t j = 0; j < k; ++j) {
      S* row = col + (ci * k + j) * t_out;
      const int64_t base = j * cs.dilation - cs.pad;
      for (int64_t to = 0; to < t_out; ++to) {
        const int64_t ti = base + to * cs.stride;
        row[to] = (ti >= 0 && ti < t_in) ? xc[ti] : S(0);
      }
    }
  }
}

template <typename S>
void col2im_add(const S* col, int64_t c_in, int64_t t_in, int64_t k,
                const ConvSpec& cs, int64_t t_out, S* gx) {
  for (int64_t ci = 0; ci < c_in; ++ci) {
    S* gc = gx + ci * t_in;
    for (int64_t j = 0; j < k; ++j) {
      const S* row = col + (ci * k + j) * t_out;
      const int64_t base = j * cs.dilation - cs.pad;
      for (int64_t to = 0; to < t_out; ++to) {
        const int64_t ti = base + to * cs.stride;
        if (ti >= 0 && ti < t_in) gc[ti] += row[to];
      }
    }
  }
}

}  // namespace detail

// weight: (C_out, C_in, k); bias: (C_out) or empty.
template <typename S>
Tensor<S> conv1d(const Tensor<S>& x, const Tensor<S>& w, const Tensor<S>& b,
                 const ConvSpec& cs) {
  RAWNET3_CHECK(x.rank() == 3 && w.rank() == 3, "conv1d expects rank-3 input/weight");
  const int64_t n = x.dim(0), c_in = x.dim(1), t_in = x.dim(2);
  const int64_t c_out = w.dim(0), k = w.dim(2);
  RAWNET3_CHECK(w.dim(1) == c_in, "conv1d channel mismatch: input ", c_in,
                " vs weight ", w.dim(1));
  RAWNET3_CHECK(cs.stride >= 1 && cs.dilation >= 1 && cs.pad >= 0,
                "conv1d bad spec");
  const int64_t t_out = conv_out_len(t_in, k, cs);
  RAWNET3_CHECK(t_out >= 1, "conv1d input too short: T=", t_in, " k=", k,
                " d=", cs.dilation, " pad=", cs.pad);
  Tensor<S> y({n, c_out, t_out});

  CMapR<S> wm(w.v.data(), c_out, c_in * k);
  const bool direct = (k == 1 && cs.dilation == 1 && cs.pad == 0 && cs.stride == 1);
  std::vector<S> col;
  if (!direct) col.resize(static_cast<size_t>(c_in * k * t_out));
  for (int64_t i = 0; i < n; ++i) {
    MapR<S> ym(y.v.data() + i * c_out * t_out, c_out, t_out);
    if (direct) {
      CMapR<S> xm(x.v.data() + i * c_in * t_in, c_in, t_in);
      ym.noalias() = wm * xm;
    } else {
      detail::im2col(x.v.data() + i * c_in * t_in, c_in, t_in, k, cs, t_out,
                     col.data());
      CMapR<S> cm(col.data(), c_in * k, t_out);
      ym.noalias() = wm * cm;
    }
  }
  if (!b.v.empty()) {
    RAWNET3_CHECK(b.numel() == c_out, "conv1d bias size mismatch");
    for (int64_t i = 0; i < n; ++i)
      for (int64_t co = 0; co < c_out; ++co) {
        S* row = y.v.data() + (i * c_out + co) * t_out;
        const S bb = b.v[static_cast<size_t>(co)];
        for (int64_t t = 0; t < t_out; ++t) row[t] += bb;
      }
  }
  return y;
}

template <typename S>
void conv1d_backward(const Tensor<S>& x, const Tensor<S>& w,
                     const ConvSpec& cs, const Tensor<S>& gy, Tensor<S>* gx,
                     Tensor<S>* gw, Tensor<S>* gb) {
  const int64_t n = x.dim(0), c_in = x.dim(1), t_in = x.dim(2);
  const int64_t c_out = w.dim(0), k = w.dim(2);
  const int64_t t_out = gy.dim(2);
  CMapR<S> wm(w.v.data(), c_out, c_in * k);
  const bool direct = (k == 1 && cs.dilation == 1 && cs.pad == 0 && cs.stride == 1);
  std::vector<S> col;
  if (!direct && (gw || gx)) col.resize(static_cast<size_t>(c_in * k * t_out));

  for (int64_t i = 0; i < n; ++i) {
    CMapR<S> gym(gy.v.data() + i * c_out * t_out, c_out, t_out);
    if (gw) {
      MapR<S> gwm(gw->v.data(), c_out, c_in * k);
      if (direct) {
        CMapR<S> xm(x.v.data() + i * c_in * t_in, c_in, t_in);
        gwm.noalias() += gym * xm.transpose();
      } else {
        detail::im2col(x.v.data() + i * c_in * t_in, c_in, t_in, k, cs, t_out,
                       col.data());
        CMapR<S> cm(col.data(), c_in * k, t_out);
        gwm.noalias() += gym * cm.transpose();
      }
    }
    if (gx) {
      if (direct) {
        MapR<S> gxm(gx->v.data() + i * c_in * t_in, c_in, t_in);
        gxm.noalias() += wm.transpose() * gym;
      } else {
        MapR<S> cm(col.data(), c_in * k, t_out);
        cm.noalias() = wm.transpose() * gym;
        detail::col2im_add(col.data(), c_in, t_in, k, cs, t_out,
                           gx->v.data() + i * c_in * t_in);
      }
    }
  }
  if (gb) {
    for (int64_t i = 0; i < n; ++i)
      for (int64_t co = 0; co < c_out; ++co) {
        const S* row = gy.v.data() + (i * c_out + co) * t_out;
        S acc = S(0);
        for (int64_t t = 0; t < t_out; ++t) acc += row[t];
        gb->v[static_cast<size_t>(co)] += acc;
      }
  }
}

// Non-overlapping max pooling; remainder frames are dropped. idx records the
// absolute source frame of each output element (first maximum on ties).
template <typename S>
Tensor<S> max_pool1d(const Tensor<S>& x, int p, std::vector<int32_t>* idx) {
  RAWNET3_CHECK(x.rank() == 3, "max_pool1d expects (N,C,T)");
  RAWNET3_CHECK(p >= 1, "max_pool1d pool size must be >= 1");
  const int64_t n = x.dim(0), c = x.dim(1), t = x.dim(2);
  const int64_t to = t / p;
  RAWNET3_CHECK(to >= 1, "max_pool1d: T=", t, " shorter than pool ", p);
  Tensor<S> y({n, c, to});
  if (idx) idx->resize(static_cast<size_t>(n * c * to));
  for (int64_t i = 0; i < n * c; ++i) {
    const S* src = x.v.data() + i * t;
    S* dst = y.v.data() + i * to;
    for (int64_t o = 0; o < to; ++o) {
      const int64_t base = o * p;
      S best = src[base];
      int32_t bi = static_cast<int32_t>(base);
      for (int64_t j = 1; j < p; ++j) {
        if (src[base + j] > best) {
          best = src[base + j];
          bi = static_cast<int32_t>(base + j);
        }
      }
      dst[o] = best;
      if (idx) (*idx)[static_cast<size_t>(i * to + o)] = bi;
    }
  }
  return y;
}

template <typename S>
void max_pool1d_backward(const std::vector<int32_t>& idx, const Tensor<S>& gy,
                         Tensor<S>* gx) {
  const int64_t rows = gy.dim(0) * gy.dim(1), to = gy.dim(2);
  const int64_t t = gx->dim(2);
  for (int64_t i = 0; i < rows; ++i) {
    const S* g = gy.v.data() + i * to;
    S* dst = gx->v.data() + i * t;
    for (int64_t o = 0; o < to; ++o)
      dst[idx[static_cast<size_t>(i * to + o)]] += g[o];
  }
}

struct BnStats {
  std::vector<double> mean;
  std::vector<double> invstd;
};

// Batch normalization over (N, T) per channel for rank-3 input, over N for
// rank-2. Biased variance; eps inside the square root.
template <typename S>
Tensor<S> batchnorm_train(const Tensor<S>& x, const Tensor<S>& gamma,
                          const Tensor<S>& beta, double eps, BnStats* stats) {
  const bool r3 = x.rank() == 3;
  const int64_t n = x.dim(0), c = r3 ? x.dim(1) : x.dim(1);
  const int64_t t = r3 ? x.dim(2) : 1;
  const int64_t m = n * t;
  RAWNET3_CHECK(gamma.numel() == c && beta.numel() == c, "batchnorm affine size");
  stats->mean.assign(static_cast<size_t>(c), 0.0);
  stats->invstd.assign(static_cast<size_t>(c), 0.0);
  for (int64_t ch = 0; ch < c; ++ch) {
    double acc = 0.0;
    for (int64_t i = 0; i < n; ++i) {
      const S* row = x.v.data() + (i * c + ch) * t;
      for (int64_t j = 0; j < t; ++j) acc += static_cast<double>(row[j]);
    }
    const double mu = acc / static_cast<double>(m);
    double v = 0.0;
    for (int64_t i = 0; i < n; ++i) {
      const S* row = x.v.data() + (i * c + ch) * t;
      for (int64_t j = 0; j < t; ++j) {
        const double d = static_cast<double>(row[j]) - mu;
        v += d * d;
      }
    }
    v /= static_cast<double>(m);
    stats->mean[static_cast<size_t>(ch)] = mu;
    stats->invstd[static_cast<size_t>(ch)] = 1.0 / std::sqrt(v + eps);
  }
  Tensor<S> y(x.shape);
  for (int64_t i = 0; i < n; ++i)
    for (int64_t ch = 0; ch < c; ++ch) {
      const S* src = x.v.data() + (i * c + ch) * t;
      S* dst = y.v.data() + (i * c + ch) * t;
      const double mu = stats->mean[static_cast<size_t>(ch)];
      const double is = stats->invstd[static_cast<size_t>(ch)];
      const double g = static_cast<double>(gamma.v[static_cast<size_t>(ch)]);
      const double bb = static_cast<double>(beta.v[static_cast<size_t>(ch)]);
      for (int64_t j = 0; j < t; ++j)
        dst[j] = static_cast<S>((static_cast<double>(src[j]) - mu) * is * g + bb);
    }
  return y;
}

template <typename S>
Tensor<S> batchnorm_eval(const Tensor<S>& x, const Tensor<S>& gamma,
                         const Tensor<S>& beta, const Tensor<S>& rmean,
                         const Tensor<S>& rvar, double eps) {
  const bool r3 = x.rank() == 3;
  const int64_t n = x.dim(0), c = x.dim(1), t = r3 ? x.dim(2) : 1;
  Tensor<S> y(x.shape);
  for (int64_t i = 0; i < n; ++i)
    for (int64_t ch = 0; ch < c; ++ch) {
      const S* src = x.v.data() + (i * c + ch) * t;
      S* dst = y.v.data() + (i * c + ch) * t;
      const double mu = static_cast<double>(rmean.v[static_cast<size_t>(ch)]);
      const double is =
          1.0 / std::sqrt(static_cast<double>(rvar.v[static_cast<size_t>(ch)]) + eps);
      const double g = static_cast<double>(gamma.v[static_cast<size_t>(ch)]);
      const double bb = static_cast<double>(beta.v[static_cast<size_t>(ch)]);
      for (int64_t j = 0; j < t; ++j)
        dst[j] = static_cast<S>((static_cast<double>(src[j]) - mu) * is * g + bb);
    }
  return y;
}

template <typename S>
void batchnorm_train_backward(const Tensor<S>& x, const Tensor<S>& gamma,
                              const BnStats& stats, const Tensor<S>& gy,
                              Tensor<S>* gx, Tensor<S>* ggamma,
                              Tensor<S>* gbeta) {
  const bool r3 = x.rank() == 3;
  const int64_t n = x.dim(0), c = x.dim(1), t = r3 ? x.dim(2) : 1;
  const double m = static_cast<double>(n * t);
  for (int64_t ch = 0; ch < c; ++ch) {
    const double mu = stats.mean[static_cast<size_t>(ch)];
    const double is = stats.invstd[static_cast<size_t>(ch)];
    double sum_g = 0.0, sum_gxh = 0.0;
    for (int64_t i = 0; i < n; ++i) {
      const S* xr = x.v.data() + (i * c + ch) * t;
      const S* gr = gy.v.data() + (i * c + ch) * t;
      for (int64_t j = 0; j < t; ++j) {
        const double xh = (static_cast<double>(xr[j]) - mu) * is;
        sum_g += static_cast<double>(gr[j]);
        sum_gxh += static_cast<double>(gr[j]) * xh;
      }
    }
    if (gbeta) gbeta->v[static_cast<size_t>(ch)] += static_cast<S>(sum_g);
    if (ggamma) ggamma->v[static_cast<size_t>(ch)] += static_cast<S>(sum_gxh);
    if (gx) {
      const double g = static_cast<double>(gamma.v[static_cast<size_t>(ch)]);
      const double scale = g * is;
      for (int64_t i = 0; i < n; ++i) {
        const S* xr = x.v.data() + (i * c + ch) * t;
        const S* gr = gy.v.data() + (i * c + ch) * t;
        S* dr = gx->v.data() + (i * c + ch) * t;
        for (int64_t j = 0; j < t; ++j) {
          const double xh = (static_cast<double>(xr[j]) - mu) * is;
          dr[j] += static_cast<S>(
              scale * (static_cast<double>(gr[j]) - sum_g / m - xh * sum_gxh / m));
        }
      }
    }
  }
}

template <typename S>
void batchnorm_eval_backward(const Tensor<S>& x, const Tensor<S>& gamma,
                             const Tensor<S>& rmean, const Tensor<S>& rvar,
                             double eps, const Tensor<S>& gy, Tensor<S>* gx,
                             Tensor<S>* ggamma, Tensor<S>* gbeta) {
  const bool r3 = x.rank() == 3;
  const int64_t n = x.dim(0), c = x.dim(1), t = r3 ? x.dim(2) : 1;
  for (int64_t ch = 0; ch < c; ++ch) {
    const double mu = static_cast<double>(rmean.v[static_cast<size_t>(ch)]);
    const double is =
        1.0 / std::sqrt(static_cast<double>(rvar.v[static_cast<size_t>(ch)]) + eps);
    const double g = static_cast<double>(gamma.v[static_cast<size_t>(ch)]);
    double sum_g = 0.0, sum_gxh = 0.0;
    for (int64_t i = 0; i < n; ++i) {
      const S* xr = x.v.data() + (i * c + ch) * t;
      const S* gr = gy.v.data() + (i * c + ch) * t;
      S* dr = gx ? gx->v.data() + (i * c + ch) * t : nullptr;
      for (int64_t j = 0; j < t; ++j) {
        const double xh = (static_cast<double>(xr[j]) - mu) * is;
        sum_g += static_cast<double>(gr[j]);
        sum_gxh += static_cast<double>(gr[j]) * xh;
        if (dr) dr[j] += static_cast<S>(static_cast<double>(gr[j]) * g * is);
      }
    }
    if (gbeta) gbeta->v[static_cast<size_t>(ch)] += static_cast<S>(sum_g);
    if (ggamma) ggamma->v[static_cast<size_t>(ch)] += static_cast<S>(sum_gxh);
  }
}

// x: (N, In), w: (Out, In), b: (Out) or empty -> (N, Out)
template <typename S>
Tensor<S> linear(const Tensor<S>& x, const Tensor<S>& w, const Tensor<S>& b) {
  RAWNET3_CHECK(x.rank() == 2 && w.rank() == 2, "linear expects rank-2");
  RAWNET3_CHECK(x.dim(1) == w.dim(1), "linear shape mismatch: ", x.shape_str(),
                " vs ", w.shape_str());
  const int64_t n = x.dim(0), in = x.dim(1), out = w.dim(0);
  Tensor<S> y({n, out});
  CMapR<S> xm(x.v.data(), n, in);
  CMapR<S> wm(w.v.data(), out, in);
  MapR<S> ym(y.v.data(), n, out);
  ym.noalias() = xm * wm.transpose();
  if (!b.v.empty()) {
    RAWNET3_CHECK(b.numel() == out, "linear bias size");
    for (int64_t i = 0; i < n; ++i)
      for (int64_t j = 0; j < out; ++j) y.at(i, j) += b.v[static_cast<size_t>(j)];
  }
  return y;
}

template <typename S>
void linear_backward(const Tensor<S>& x, const Tensor<S>& w,
                     const Tensor<S>& gy, Tensor<S>* gx, Tensor<S>* gw,
                     Tensor<S>* gb) {
  const int64_t n = x.dim(0), in = x.dim(1), out = w.dim(0);
  CMapR<S> xm(x.v.data(), n, in);
  CMapR<S> wm(w.v.data(), out, in);
  CMapR<S> gym(gy.v.data(), n, out);
  if (gx) {
    MapR<S> gxm(gx->v.data(), n, in);
    gxm.noalias() += gym * wm;
  }
  if (gw) {
    MapR<S> gwm(gw->v.data(), out, in);
    gwm.noalias() += gym.transpose() * xm;
  }
  if (gb) {
    for (int64_t i = 0; i < n; ++i)
      for (int64_t j = 0; j < out; ++j)
        gb->v[static_cast<size_t>(j)] += gy.at(i, j);
  }
}

// --- elementwise ---

template <typename S, typename F>
Tensor<S> map_unary(const Tensor<S>& x, F f) {
  Tensor<S> y(x.shape);
  for (size_t i = 0; i < x.v.size(); ++i) y.v[i] = f(x.v[i]);
  return y;
}

template <typename S>
Tensor<S> relu(const Tensor<S>& x) {
  return map_unary(x, [](S a) { return a > S(0) ? a : S(0); });
}
template <typename S>
Tensor<S> sigmoid(const Tensor<S>& x) {
  return map_unary(x, [](S a) {
    return static_cast<S>(1.0 / (1.0 + std::exp(-static_cast<double>(a))));
  });
}
template <typename S>
Tensor<S> tanh_t(const Tensor<S>& x) {
  return map_unary(x, [](S a) { return static_cast<S>(std::tanh(static_cast<double>(a))); });
}
template <typename S>
Tensor<S> gelu(const Tensor<S>& x) {
  return map_unary(x, [](S a) {
    const double z = static_cast<double>(a);
    return static_cast<S>(0.5 * z * (1.0 + std::erf(z * M_SQRT1_2)));
  });
}

// sqrt(re^2 + im^2 + eps): modulus of the analytic signal.
template <typename S>
Tensor<S> modulus(const Tensor<S>& re, const Tensor<S>& im, double eps) {
  RAWNET3_CHECK(re.same_shape(im), "modulus shape mismatch");
  Tensor<S> y(re.shape);
  for (size_t i = 0; i < re.v.size(); ++i) {
    const double a = static_cast<double>(re.v[i]);
    const double b = static_cast<double>(im.v[i]);
    y.v[i] = static_cast<S>(std::sqrt(a * a + b * b + eps));
  }
  return y;
}

template <typename S>
Tensor<S> log_eps(const Tensor<S>& x, double eps) {
  Tensor<S> y(x.shape);
  for (size_t i = 0; i < x.v.size(); ++i) {
    RAWNET3_CHECK(x.v[i] >= S(0), "log_compress input must be non-negative");
    y.v[i] = static_cast<S>(std::log(static_cast<double>(x.v[i]) + eps));
  }
  return y;
}

template <typename S>
Tensor<S> sqrt_floor(const Tensor<S>& x, double floor_v) {
  return map_unary(x, [floor_v](S a) {
    return static_cast<S>(
        std::sqrt(std::max(static_cast<double>(a), floor_v)));
  });
}

// --- reductions and broadcasts over the time axis ---

template <typename S>
Tensor<S> mean_time(const Tensor<S>& x) {
  RAWNET3_CHECK(x.rank() == 3, "mean_time expects (N,C,T)");
  const int64_t rows = x.dim(0) * x.dim(1), t = x.dim(2);
  Tensor<S> y({x.dim(0), x.dim(1)});
  for (int64_t i = 0; i < rows; ++i) {
    const S* src = x.v.data() + i * t;
    double acc = 0.0;
    for (int64_t j = 0; j < t; ++j) acc += static_cast<double>(src[j]);
    y.v[static_cast<size_t>(i)] = static_cast<S>(acc / static_cast<double>(t));
  }
  return y;
}

template <typename S>
Tensor<S> sum_time(const Tensor<S>& x) {
  const int64_t rows = x.dim(0) * x.dim(1), t = x.dim(2);
  Tensor<S> y({x.dim(0), x.dim(1)});
  for (int64_t i = 0; i < rows; ++i) {
    const S* src = x.v.data() + i * t;
    double acc = 0.0;
    for (int64_t j = 0; j < t; ++j) acc += static_cast<double>(src[j]);
    y.v[static_cast<size_t>(i)] = static_cast<S>(acc);
  }
  return y;
}

template <typename S>
Tensor<S> broadcast_time(const Tensor<S>& x, int64_t t) {
  RAWNET3_CHECK(x.rank() == 2, "broadcast_time expects (N,C)");
  Tensor<S> y({x.dim(0), x.dim(1), t});
  const int64_t rows = x.dim(0) * x.dim(1);
  for (int64_t i = 0; i < rows; ++i) {
    S* dst = y.v.data() + i * t;
    const S val = x.v[static_cast<size_t>(i)];
    for (int64_t j = 0; j < t; ++j) dst[j] = val;
  }
  return y;
}

// y = x - mean over time, per (n, c) row.
template <typename S>
Tensor<S> mean_norm_time(const Tensor<S>& x) {
  const int64_t rows = x.dim(0) * x.dim(1), t = x.dim(2);
  Tensor<S> y(x.shape);
  for (int64_t i = 0; i < rows; ++i) {
    const S* src = x.v.data() + i * t;
    S* dst = y.v.data() + i * t;
    double acc = 0.0;
    for (int64_t j = 0; j < t; ++j) acc += static_cast<double>(src[j]);
    const S mu = static_cast<S>(acc / static_cast<double>(t));
    for (int64_t j = 0; j < t; ++j) dst[j] = src[j] - mu;
  }
  return y;
}

// Row-wise softmax over the last axis of a rank-2 or rank-3 tensor.
template <typename S>
Tensor<S> softmax_rows(const Tensor<S>& x) {
  const int64_t t = x.shape.back();
  const int64_t rows = x.numel() / t;
  Tensor<S> y(x.shape);
  for (int64_t i = 0; i < rows; ++i) {
    const S* src = x.v.data() + i * t;
    S* dst = y.v.data() + i * t;
    double mx = static_cast<double>(src[0]);
    for (int64_t j = 1; j < t; ++j) mx = std::max(mx, static_cast<double>(src[j]));
    double z = 0.0;
    for (int64_t j = 0; j < t; ++j) {
      const double e = std::exp(static_cast<double>(src[j]) - mx);
      dst[j] = static_cast<S>(e);
      z += e;
    }
    const double inv = 1.0 / z;
    for (int64_t j = 0; j < t; ++j) dst[j] = static_cast<S>(static_cast<double>(dst[j]) * inv);
  }
  return y;
}

// Row-wise l2 normalization of (N, D). eps goes under the square root; with
// eps == 0 a numerically zero row is an error rather than a silent clamp.
template <typename S>
Tensor<S> l2_normalize_rows(const Tensor<S>& x, double eps,
                            std::vector<double>* inv_norms) {
  RAWNET3_CHECK(x.rank() == 2, "l2_normalize_rows expects (N,D)");
  const int64_t n = x.dim(0), d = x.dim(1);
  Tensor<S> y(x.shape);
  if (inv_norms) inv_norms->assign(static_cast<size_t>(n), 0.0);
  for (int64_t i = 0; i < n; ++i) {
    const S* src = x.v.data() + i * d;
    S* dst = y.v.data() + i * d;
    double ss = 0.0;
    for (int64_t j = 0; j < d; ++j)
      ss += static_cast<double>(src[j]) * static_cast<double>(src[j]);
    if (eps == 0.0 && ss < 1e-60)
      throw NumericalError("l2 normalization of a zero-norm vector");
    const double inv = 1.0 / std::sqrt(ss + eps);
    if (inv_norms) (*inv_norms)[static_cast<size_t>(i)] = inv;
    for (int64_t j = 0; j < d; ++j)
      dst[j] = static_cast<S>(static_cast<double>(src[j]) * inv);
  }
  return y;
}

}  // namespace kernels
}  // namespace rawnet3

#endif  // RAWNET3_KERNELS_HPP_
