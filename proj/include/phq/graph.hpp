// Define-by-run reverse-mode differentiation over Tensor<T>. A Graph records
// one forward computation; backward() walks the tape in reverse and fills
// gradients for every node reachable from the loss. Nodes the loss does not
// depend on simply keep an empty gradient (read as zero).
#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <vector>

#include "phq/rng.hpp"
#include "phq/tensor.hpp"

namespace phq {

using NodeId = int;

template <typename T>
class Graph {
 public:
  // rng is only consumed by dropout in train mode.
  explicit Graph(bool train_mode = false, Rng* rng = nullptr)
      : train_(train_mode), rng_(rng) {}

  bool train_mode() const { return train_; }
  std::size_t size() const { return nodes_.size(); }

  const Tensor<T>& value(NodeId id) const { return nodes_[id].value; }

  // Gradient of the last backward() loss w.r.t. node id; zeros if untouched.
  Tensor<T> grad(NodeId id) const {
    const Node& n = nodes_[id];
    if (n.grad.data.empty()) return Tensor<T>(n.value.shape);
    return n.grad;
  }

  NodeId leaf(Tensor<T> v, bool requires_grad = false) {
    return push(std::move(v), requires_grad, {});
  }

  // y[t] = b + sum_j x[t - dilation*(k-1-j)] * w[j], zero left padding.
  NodeId causal_conv1d(NodeId xi, NodeId wi, NodeId bi, int dilation) {
    const Tensor<T>& x = nodes_[xi].value;
    const Tensor<T>& w = nodes_[wi].value;
    const Tensor<T>& b = nodes_[bi].value;
    if (dilation < 1) throw Error(ErrorKind::kParameter, "dilation must be >= 1");
    if (x.rank() != 2 || w.rank() != 3)
      throw Error(ErrorKind::kDimension, "causal_conv1d expects x[T,Cin], w[k,Cin,Cout]");
    const long tlen = x.dim(0), cin = x.dim(1);
    const long k = w.dim(0), cout = w.dim(2);
    if (w.dim(1) != cin)
      throw Error(ErrorKind::kDimension, "kernel input channels " + w.shape_str() +
                                             " do not match input " + x.shape_str());
    if (b.numel() != cout)
      throw Error(ErrorKind::kDimension, "conv bias width does not match output channels");

    Tensor<T> y({tlen, cout});
    for (long t = 0; t < tlen; ++t) {
      T* yr = y.row_ptr(t);
      for (long oc = 0; oc < cout; ++oc) yr[oc] = b[oc];
      for (long j = 0; j < k; ++j) {
        const long s = t - static_cast<long>(dilation) * (k - 1 - j);
        if (s < 0) continue;
        const T* xr = x.row_ptr(s);
        const T* wj = w.data.data() + j * cin * cout;
        for (long ic = 0; ic < cin; ++ic) {
          const T a = xr[ic];
          if (a == T(0)) continue;
          const T* wr = wj + ic * cout;
          for (long oc = 0; oc < cout; ++oc) yr[oc] += a * wr[oc];
        }
      }
    }

    return push(std::move(y), any_grad({xi, wi, bi}), [this, xi, wi, bi, dilation](NodeId self) {
      const Tensor<T>& g = nodes_[self].grad;
      const Tensor<T>& x = nodes_[xi].value;
      const Tensor<T>& w = nodes_[wi].value;
      const long tlen = x.dim(0), cin = x.dim(1);
      const long k = w.dim(0), cout = w.dim(2);
      if (nodes_[bi].requires_grad) {
        Tensor<T>& db = grad_buf(bi);
        for (long t = 0; t < tlen; ++t) {
          const T* gr = g.row_ptr(t);
          for (long oc = 0; oc < cout; ++oc) db[oc] += gr[oc];
        }
      }
      if (nodes_[wi].requires_grad) {
        Tensor<T>& dw = grad_buf(wi);
        for (long t = 0; t < tlen; ++t) {
          const T* gr = g.row_ptr(t);
          for (long j = 0; j < k; ++j) {
            const long s = t - static_cast<long>(dilation) * (k - 1 - j);
            if (s < 0) continue;
            const T* xr = x.row_ptr(s);
            T* dwj = dw.data.data() + j * cin * cout;
            for (long ic = 0; ic < cin; ++ic) {
              const T a = xr[ic];
              if (a == T(0)) continue;
              T* dwr = dwj + ic * cout;
              for (long oc = 0; oc < cout; ++oc) dwr[oc] += a * gr[oc];
            }
          }
        }
      }
      if (nodes_[xi].requires_grad) {
        Tensor<T>& dx = grad_buf(xi);
        for (long t = 0; t < tlen; ++t) {
          const T* gr = g.row_ptr(t);
          for (long j = 0; j < k; ++j) {
            const long s = t - static_cast<long>(dilation) * (k - 1 - j);
            if (s < 0) continue;
            T* dxr = dx.row_ptr(s);
            const T* wj = w.data.data() + j * cin * cout;
            for (long ic = 0; ic < cin; ++ic) {
              const T* wr = wj + ic * cout;
              T acc = T(0);
              for (long oc = 0; oc < cout; ++oc) acc += wr[oc] * gr[oc];
              dxr[ic] += acc;
            }
          }
        }
      }
    });
  }

  // Affine map along the trailing axis: x[.., in] -> [.., out].
  NodeId dense(NodeId xi, NodeId wi, NodeId bi) {
    NodeId y = matmul(xi, wi);
    return add_bias(y, bi);
  }

  // x[.., in] @ w[in, out], no bias.
  NodeId matmul(NodeId xi, NodeId wi) {
    const Tensor<T>& x = nodes_[xi].value;
    const Tensor<T>& w = nodes_[wi].value;
    if (w.rank() != 2)
      throw Error(ErrorKind::kDimension, "matmul weights must be rank 2");
    const long in = w.dim(0), out = w.dim(1);
    if (x.cols() != in)
      throw Error(ErrorKind::kDimension, "matmul input width " + x.shape_str() +
                                             " does not match weights " + w.shape_str());
    const long rows = x.rows();
    std::vector<long> yshape = x.shape;
    yshape.back() = out;
    Tensor<T> y(std::move(yshape));
    for (long r = 0; r < rows; ++r) {
      const T* xr = x.row_ptr(r);
      T* yr = y.row_ptr(r);
      for (long i = 0; i < in; ++i) {
        const T a = xr[i];
        if (a == T(0)) continue;
        const T* wr = w.row_ptr(i);
        for (long o = 0; o < out; ++o) yr[o] += a * wr[o];
      }
    }
    return push(std::move(y), any_grad({xi, wi}), [this, xi, wi](NodeId self) {
      const Tensor<T>& g = nodes_[self].grad;
      const Tensor<T>& x = nodes_[xi].value;
      const Tensor<T>& w = nodes_[wi].value;
      const long rows = x.rows(), in = w.dim(0), out = w.dim(1);
      if (nodes_[wi].requires_grad) {
        Tensor<T>& dw = grad_buf(wi);
        for (long r = 0; r < rows; ++r) {
          const T* xr = x.row_ptr(r);
          const T* gr = g.row_ptr(r);
          for (long i = 0; i < in; ++i) {
            const T a = xr[i];
            if (a == T(0)) continue;
            T* dwr = dw.row_ptr(i);
            for (long o = 0; o < out; ++o) dwr[o] += a * gr[o];
          }
        }
      }
      if (nodes_[xi].requires_grad) {
        Tensor<T>& dx = grad_buf(xi);
        for (long r = 0; r < rows; ++r) {
          T* dxr = dx.row_ptr(r);
          const T* gr = g.row_ptr(r);
          for (long i = 0; i < in; ++i) {
            const T* wr = w.row_ptr(i);
            T acc = T(0);
            for (long o = 0; o < out; ++o) acc += wr[o] * gr[o];
            dxr[i] += acc;
          }
        }
      }
    });
  }

  // Adds a width-matching bias vector to every row.
  NodeId add_bias(NodeId xi, NodeId bi) {
    const Tensor<T>& x = nodes_[xi].value;
    const Tensor<T>& b = nodes_[bi].value;
    if (b.numel() != x.cols())
      throw Error(ErrorKind::kDimension, "bias width does not match trailing extent");
    Tensor<T> y = x;
    const long rows = x.rows(), cols = x.cols();
    for (long r = 0; r < rows; ++r) {
      T* yr = y.row_ptr(r);
      for (long c = 0; c < cols; ++c) yr[c] += b[c];
    }
    return push(std::move(y), any_grad({xi, bi}), [this, xi, bi](NodeId self) {
      const Tensor<T>& g = nodes_[self].grad;
      if (nodes_[xi].requires_grad) {
        Tensor<T>& dx = grad_buf(xi);
        for (long i = 0; i < g.numel(); ++i) dx[i] += g[i];
      }
      if (nodes_[bi].requires_grad) {
        Tensor<T>& db = grad_buf(bi);
        const long rows = g.rows(), cols = g.cols();
        for (long r = 0; r < rows; ++r) {
          const T* gr = g.row_ptr(r);
          for (long c = 0; c < cols; ++c) db[c] += gr[c];
        }
      }
    });
  }

  NodeId relu(NodeId xi) {
    Tensor<T> y = nodes_[xi].value;
    for (auto& v : y.data) v = v > T(0) ? v : T(0);
    return push(std::move(y), any_grad({xi}), [this, xi](NodeId self) {
      if (!nodes_[xi].requires_grad) return;
      const Tensor<T>& g = nodes_[self].grad;
      const Tensor<T>& x = nodes_[xi].value;
      Tensor<T>& dx = grad_buf(xi);
      for (long i = 0; i < g.numel(); ++i)
        if (x[i] > T(0)) dx[i] += g[i];
    });
  }

  NodeId sigmoid(NodeId xi) {
    Tensor<T> y = nodes_[xi].value;
    for (auto& v : y.data) v = T(1) / (T(1) + std::exp(-v));
    return push(std::move(y), any_grad({xi}), [this, xi](NodeId self) {
      if (!nodes_[xi].requires_grad) return;
      const Tensor<T>& g = nodes_[self].grad;
      const Tensor<T>& y = nodes_[self].value;
      Tensor<T>& dx = grad_buf(xi);
      for (long i = 0; i < g.numel(); ++i) dx[i] += g[i] * y[i] * (T(1) - y[i]);
    });
  }

  NodeId tanh_(NodeId xi) {
    Tensor<T> y = nodes_[xi].value;
    for (auto& v : y.data) v = std::tanh(v);
    return push(std::move(y), any_grad({xi}), [this, xi](NodeId self) {
      if (!nodes_[xi].requires_grad) return;
      const Tensor<T>& g = nodes_[self].grad;
      const Tensor<T>& y = nodes_[self].value;
      Tensor<T>& dx = grad_buf(xi);
      for (long i = 0; i < g.numel(); ++i) dx[i] += g[i] * (T(1) - y[i] * y[i]);
    });
  }

  NodeId add(NodeId ai, NodeId bi) {
    const Tensor<T>& a = nodes_[ai].value;
    const Tensor<T>& b = nodes_[bi].value;
    if (!a.same_shape(b))
      throw Error(ErrorKind::kDimension, "add shape mismatch " + a.shape_str() + " vs " + b.shape_str());
    Tensor<T> y = a;
    for (long i = 0; i < y.numel(); ++i) y[i] += b[i];
    return push(std::move(y), any_grad({ai, bi}), [this, ai, bi](NodeId self) {
      const Tensor<T>& g = nodes_[self].grad;
      for (NodeId pi : {ai, bi}) {
        if (!nodes_[pi].requires_grad) continue;
        Tensor<T>& dp = grad_buf(pi);
        for (long i = 0; i < g.numel(); ++i) dp[i] += g[i];
      }
    });
  }

  // Elementwise (Hadamard) product.
  NodeId mul(NodeId ai, NodeId bi) {
    const Tensor<T>& a = nodes_[ai].value;
    const Tensor<T>& b = nodes_[bi].value;
    if (!a.same_shape(b))
      throw Error(ErrorKind::kDimension, "mul shape mismatch " + a.shape_str() + " vs " + b.shape_str());
    Tensor<T> y = a;
    for (long i = 0; i < y.numel(); ++i) y[i] *= b[i];
    return push(std::move(y), any_grad({ai, bi}), [this, ai, bi](NodeId self) {
      const Tensor<T>& g = nodes_[self].grad;
      const Tensor<T>& a = nodes_[ai].value;
      const Tensor<T>& b = nodes_[bi].value;
      if (nodes_[ai].requires_grad) {
        Tensor<T>& da = grad_buf(ai);
        for (long i = 0; i < g.numel(); ++i) da[i] += g[i] * b[i];
      }
      if (nodes_[bi].requires_grad) {
        Tensor<T>& db = grad_buf(bi);
        for (long i = 0; i < g.numel(); ++i) db[i] += g[i] * a[i];
      }
    });
  }

  // Contiguous slice of a rank-1 tensor.
  NodeId slice(NodeId xi, long offset, long len) {
    const Tensor<T>& x = nodes_[xi].value;
    if (x.rank() != 1 || offset < 0 || len <= 0 || offset + len > x.numel())
      throw Error(ErrorKind::kDimension, "invalid slice of " + x.shape_str());
    Tensor<T> y({len});
    for (long i = 0; i < len; ++i) y[i] = x[offset + i];
    return push(std::move(y), any_grad({xi}), [this, xi, offset, len](NodeId self) {
      if (!nodes_[xi].requires_grad) return;
      const Tensor<T>& g = nodes_[self].grad;
      Tensor<T>& dx = grad_buf(xi);
      for (long i = 0; i < len; ++i) dx[offset + i] += g[i];
    });
  }

  // Row r of a rank-2 tensor as a vector.
  NodeId row(NodeId xi, long r) {
    const Tensor<T>& x = nodes_[xi].value;
    if (x.rank() != 2 || r < 0 || r >= x.dim(0))
      throw Error(ErrorKind::kDimension, "invalid row " + std::to_string(r) + " of " + x.shape_str());
    const long cols = x.cols();
    Tensor<T> y({cols});
    for (long c = 0; c < cols; ++c) y[c] = x.at(r, c);
    return push(std::move(y), any_grad({xi}), [this, xi, r](NodeId self) {
      if (!nodes_[xi].requires_grad) return;
      const Tensor<T>& g = nodes_[self].grad;
      Tensor<T>& dx = grad_buf(xi);
      const long cols = g.numel();
      for (long c = 0; c < cols; ++c) dx.at(r, c) += g[c];
    });
  }

  // Stacks equal-width vectors into [T, C].
  NodeId stack_rows(const std::vector<NodeId>& parts) {
    if (parts.empty()) throw Error(ErrorKind::kInput, "stack_rows with no rows");
    const long cols = nodes_[parts[0]].value.numel();
    Tensor<T> y({static_cast<long>(parts.size()), cols});
    for (std::size_t r = 0; r < parts.size(); ++r) {
      const Tensor<T>& p = nodes_[parts[r]].value;
      if (p.rank() != 1 || p.numel() != cols)
        throw Error(ErrorKind::kDimension, "stack_rows width mismatch");
      for (long c = 0; c < cols; ++c) y.at(static_cast<long>(r), c) = p[c];
    }
    bool rg = false;
    for (NodeId p : parts) rg = rg || nodes_[p].requires_grad;
    std::vector<NodeId> parents = parts;
    return push(std::move(y), rg, [this, parents](NodeId self) {
      const Tensor<T>& g = nodes_[self].grad;
      const long cols = g.cols();
      for (std::size_t r = 0; r < parents.size(); ++r) {
        if (!nodes_[parents[r]].requires_grad) continue;
        Tensor<T>& dp = grad_buf(parents[r]);
        for (long c = 0; c < cols; ++c) dp[c] += g.at(static_cast<long>(r), c);
      }
    });
  }

  // Concatenates rank-1 tensors.
  NodeId concat(const std::vector<NodeId>& parts) {
    if (parts.empty()) throw Error(ErrorKind::kInput, "concat with no parts");
    long total = 0;
    for (NodeId p : parts) {
      if (nodes_[p].value.rank() != 1)
        throw Error(ErrorKind::kDimension, "concat expects rank-1 parts");
      total += nodes_[p].value.numel();
    }
    Tensor<T> y({total});
    long off = 0;
    for (NodeId p : parts) {
      const Tensor<T>& v = nodes_[p].value;
      for (long i = 0; i < v.numel(); ++i) y[off + i] = v[i];
      off += v.numel();
    }
    bool rg = false;
    for (NodeId p : parts) rg = rg || nodes_[p].requires_grad;
    std::vector<NodeId> parents = parts;
    return push(std::move(y), rg, [this, parents](NodeId self) {
      const Tensor<T>& g = nodes_[self].grad;
      long off = 0;
      for (NodeId p : parents) {
        const long n = nodes_[p].value.numel();
        if (nodes_[p].requires_grad) {
          Tensor<T>& dp = grad_buf(p);
          for (long i = 0; i < n; ++i) dp[i] += g[off + i];
        }
        off += n;
      }
    });
  }

  // Inverted dropout: train mode zeroes with probability p and scales
  // survivors by 1/(1-p); eval mode is the identity.
  NodeId dropout(NodeId xi, double p) {
    if (p < 0.0 || p >= 1.0)
      throw Error(ErrorKind::kParameter, "dropout probability must be in [0, 1)");
    if (!train_ || p == 0.0) return xi;
    if (rng_ == nullptr) throw Error(ErrorKind::kState, "dropout in train mode needs an rng");
    const Tensor<T>& x = nodes_[xi].value;
    const T keep_scale = static_cast<T>(1.0 / (1.0 - p));
    auto mask = std::make_shared<std::vector<bool>>(x.data.size());
    Tensor<T> y = x;
    for (long i = 0; i < y.numel(); ++i) {
      const bool keep = !rng_->bernoulli(p);
      (*mask)[static_cast<std::size_t>(i)] = keep;
      y[i] = keep ? y[i] * keep_scale : T(0);
    }
    return push(std::move(y), any_grad({xi}), [this, xi, mask, keep_scale](NodeId self) {
      if (!nodes_[xi].requires_grad) return;
      const Tensor<T>& g = nodes_[self].grad;
      Tensor<T>& dx = grad_buf(xi);
      for (long i = 0; i < g.numel(); ++i)
        if ((*mask)[static_cast<std::size_t>(i)]) dx[i] += g[i] * keep_scale;
    });
  }

  // Mean of the first n_valid rows of [T, C]; ignores padded tail rows.
  NodeId mean_rows(NodeId xi, long n_valid) {
    const Tensor<T>& x = nodes_[xi].value;
    if (x.rank() != 2 || n_valid <= 0 || n_valid > x.dim(0))
      throw Error(ErrorKind::kDimension, "mean_rows over invalid row count");
    const long cols = x.cols();
    Tensor<T> y({cols});
    for (long r = 0; r < n_valid; ++r) {
      const T* xr = x.row_ptr(r);
      for (long c = 0; c < cols; ++c) y[c] += xr[c];
    }
    const T inv = T(1) / static_cast<T>(n_valid);
    for (long c = 0; c < cols; ++c) y[c] *= inv;
    return push(std::move(y), any_grad({xi}), [this, xi, n_valid, inv](NodeId self) {
      if (!nodes_[xi].requires_grad) return;
      const Tensor<T>& g = nodes_[self].grad;
      Tensor<T>& dx = grad_buf(xi);
      const long cols = g.numel();
      for (long r = 0; r < n_valid; ++r) {
        T* dxr = dx.row_ptr(r);
        for (long c = 0; c < cols; ++c) dxr[c] += g[c] * inv;
      }
    });
  }

  NodeId sum(NodeId xi) {
    const Tensor<T>& x = nodes_[xi].value;
    T s = T(0);
    for (const T& v : x.data) s += v;
    return push(Tensor<T>::scalar(s), any_grad({xi}), [this, xi](NodeId self) {
      if (!nodes_[xi].requires_grad) return;
      const T g = nodes_[self].grad[0];
      Tensor<T>& dx = grad_buf(xi);
      for (long i = 0; i < dx.numel(); ++i) dx[i] += g;
    });
  }

  // Arithmetic mean of scalar nodes (batch loss).
  NodeId mean_of(const std::vector<NodeId>& scalars) {
    if (scalars.empty()) throw Error(ErrorKind::kInput, "mean_of with no terms");
    T s = T(0);
    bool rg = false;
    for (NodeId p : scalars) {
      if (nodes_[p].value.numel() != 1)
        throw Error(ErrorKind::kDimension, "mean_of expects scalar nodes");
      s += nodes_[p].value[0];
      rg = rg || nodes_[p].requires_grad;
    }
    const T inv = T(1) / static_cast<T>(scalars.size());
    std::vector<NodeId> parents = scalars;
    return push(Tensor<T>::scalar(s * inv), rg, [this, parents, inv](NodeId self) {
      const T g = nodes_[self].grad[0] * inv;
      for (NodeId p : parents) {
        if (!nodes_[p].requires_grad) continue;
        grad_buf(p)[0] += g;
      }
    });
  }

  // Mean binary cross entropy with probabilities clamped to [eps, 1-eps].
  NodeId bce_loss(NodeId pi, const Tensor<T>& target, double eps = 1e-7) {
    const Tensor<T>& p = nodes_[pi].value;
    if (!p.same_shape(target))
      throw Error(ErrorKind::kDimension, "bce shape mismatch");
    for (const T& y : target.data)
      if (y != T(0) && y != T(1))
        throw Error(ErrorKind::kLabel, "bce target values must be 0 or 1");
    const T lo = static_cast<T>(eps), hi = static_cast<T>(1.0 - eps);
    const long n = p.numel();
    T loss = T(0);
    for (long i = 0; i < n; ++i) {
      T q = p[i] < lo ? lo : (p[i] > hi ? hi : p[i]);
      loss -= target[i] == T(1) ? std::log(q) : std::log(T(1) - q);
    }
    loss /= static_cast<T>(n);
    auto tgt = std::make_shared<Tensor<T>>(target);
    return push(Tensor<T>::scalar(loss), any_grad({pi}), [this, pi, tgt, lo, hi](NodeId self) {
      if (!nodes_[pi].requires_grad) return;
      const T g = nodes_[self].grad[0];
      const Tensor<T>& p = nodes_[pi].value;
      Tensor<T>& dp = grad_buf(pi);
      const long n = p.numel();
      const T invn = T(1) / static_cast<T>(n);
      for (long i = 0; i < n; ++i) {
        if (p[i] < lo || p[i] > hi) continue;  // clamped: flat
        dp[i] += g * invn * (p[i] - (*tgt)[i]) / (p[i] * (T(1) - p[i]));
      }
    });
  }

  // Mean squared error.
  NodeId mse_loss(NodeId ai, const Tensor<T>& target) {
    const Tensor<T>& a = nodes_[ai].value;
    if (!a.same_shape(target))
      throw Error(ErrorKind::kDimension, "mse shape mismatch");
    const long n = a.numel();
    T loss = T(0);
    for (long i = 0; i < n; ++i) {
      const T d = a[i] - target[i];
      loss += d * d;
    }
    loss /= static_cast<T>(n);
    auto tgt = std::make_shared<Tensor<T>>(target);
    return push(Tensor<T>::scalar(loss), any_grad({ai}), [this, ai, tgt](NodeId self) {
      if (!nodes_[ai].requires_grad) return;
      const T g = nodes_[self].grad[0];
      const Tensor<T>& a = nodes_[ai].value;
      Tensor<T>& da = grad_buf(ai);
      const long n = a.numel();
      const T scale = g * T(2) / static_cast<T>(n);
      for (long i = 0; i < n; ++i) da[i] += scale * (a[i] - (*tgt)[i]);
    });
  }

  // Reverse pass from a scalar loss node.
  void backward(NodeId loss) {
    if (nodes_[loss].value.numel() != 1)
      throw Error(ErrorKind::kState, "backward requires a scalar loss node");
    grad_buf(loss)[0] = T(1);
    for (NodeId id = loss; id >= 0; --id) {
      Node& n = nodes_[id];
      if (n.backprop && !n.grad.data.empty()) n.backprop(id);
    }
  }

 private:
  struct Node {
    Tensor<T> value;
    Tensor<T> grad;  // empty until touched by backward
    bool requires_grad = false;
    std::function<void(NodeId)> backprop;
  };

  bool any_grad(std::initializer_list<NodeId> ids) const {
    for (NodeId id : ids)
      if (nodes_[id].requires_grad) return true;
    return false;
  }

  Tensor<T>& grad_buf(NodeId id) {
    Node& n = nodes_[id];
    if (n.grad.data.empty()) n.grad = Tensor<T>(n.value.shape);
    return n.grad;
  }

  NodeId push(Tensor<T> value, bool requires_grad, std::function<void(NodeId)> backprop) {
    Node n;
    n.value = std::move(value);
    n.requires_grad = requires_grad;
    if (requires_grad) n.backprop = std::move(backprop);
    nodes_.push_back(std::move(n));
    return static_cast<NodeId>(nodes_.size()) - 1;
  }

  std::vector<Node> nodes_;
  bool train_;
  Rng* rng_;
};

}  // namespace phq
