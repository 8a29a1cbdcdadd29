// Named trainable parameters, their gradients, and the Adam update.
#pragma once

#include <cmath>
#include <string>
#include <unordered_map>
#include <vector>

#include "phq/graph.hpp"
#include "phq/rng.hpp"
#include "phq/tensor.hpp"

namespace phq {

// Ordered name -> (value, gradient) map. Iteration order is insertion order,
// which keeps optimizer updates and checkpoints deterministic.
template <typename T>
class ParamSet {
 public:
  Tensor<T>& create(const std::string& name, std::vector<long> shape) {
    if (index_.count(name))
      throw Error(ErrorKind::kState, "duplicate parameter name: " + name);
    index_[name] = static_cast<int>(names_.size());
    names_.push_back(name);
    values_.emplace_back(shape);
    grads_.emplace_back(std::move(shape));
    return values_.back();
  }

  bool has(const std::string& name) const { return index_.count(name) != 0; }

  Tensor<T>& value(const std::string& name) { return values_[idx(name)]; }
  const Tensor<T>& value(const std::string& name) const { return values_[idx(name)]; }
  Tensor<T>& grad(const std::string& name) { return grads_[idx(name)]; }
  const Tensor<T>& grad(const std::string& name) const { return grads_[idx(name)]; }

  const std::vector<std::string>& names() const { return names_; }
  std::size_t size() const { return names_.size(); }

  Tensor<T>& value_at(std::size_t i) { return values_[i]; }
  const Tensor<T>& value_at(std::size_t i) const { return values_[i]; }
  Tensor<T>& grad_at(std::size_t i) { return grads_[i]; }
  const Tensor<T>& grad_at(std::size_t i) const { return grads_[i]; }

  long parameter_count() const {
    long n = 0;
    for (const auto& v : values_) n += v.numel();
    return n;
  }

  long parameter_count(const std::string& prefix) const {
    long n = 0;
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i].rfind(prefix, 0) == 0) n += values_[i].numel();
    return n;
  }

  void zero_grads() {
    for (auto& g : grads_)
      for (auto& v : g.data) v = T(0);
    grads_populated_ = false;
  }

  void accumulate_grad(const std::string& name, const Tensor<T>& g) {
    Tensor<T>& dst = grads_[idx(name)];
    if (!dst.same_shape(g))
      throw Error(ErrorKind::kDimension, "gradient shape mismatch for " + name);
    for (long i = 0; i < g.numel(); ++i) dst[i] += g[i];
    grads_populated_ = true;
  }

  bool grads_populated() const { return grads_populated_; }

 private:
  std::size_t idx(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end())
      throw Error(ErrorKind::kState, "unknown parameter name: " + name);
    return static_cast<std::size_t>(it->second);
  }

  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
  std::vector<Tensor<T>> values_;
  std::vector<Tensor<T>> grads_;
  bool grads_populated_ = false;
};

// Uniform(-a, a) with a = sqrt(6 / (fan_in + fan_out)).
template <typename T>
void init_uniform(Tensor<T>& t, long fan_in, long fan_out, Rng& rng) {
  const double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (auto& v : t.data) v = static_cast<T>(rng.uniform(-a, a));
}

template <typename T>
struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 1e-4;
  double learning_rate = 1e-3;
  long step_count = 0;
  std::vector<Tensor<T>> m, v;  // aligned with ParamSet order
};

// Classic-L2 Adam: the decay term is added to the gradient before the
// moment updates.
template <typename T>
void adam_step(ParamSet<T>& params, AdamState<T>& state) {
  if (params.size() == 0 || !params.grads_populated())
    throw Error(ErrorKind::kState, "adam_step without populated gradients");
  if (state.m.empty()) {
    for (std::size_t i = 0; i < params.size(); ++i) {
      state.m.emplace_back(params.value_at(i).shape);
      state.v.emplace_back(params.value_at(i).shape);
    }
  }
  state.step_count += 1;
  const double b1 = state.beta1, b2 = state.beta2;
  const double bc1 = 1.0 - std::pow(b1, static_cast<double>(state.step_count));
  const double bc2 = 1.0 - std::pow(b2, static_cast<double>(state.step_count));
  for (std::size_t i = 0; i < params.size(); ++i) {
    Tensor<T>& w = params.value_at(i);
    const Tensor<T>& g = params.grad_at(i);
    Tensor<T>& m = state.m[i];
    Tensor<T>& v = state.v[i];
    for (long j = 0; j < w.numel(); ++j) {
      const double gj = static_cast<double>(g[j]) + state.weight_decay * static_cast<double>(w[j]);
      const double mj = b1 * static_cast<double>(m[j]) + (1.0 - b1) * gj;
      const double vj = b2 * static_cast<double>(v[j]) + (1.0 - b2) * gj * gj;
      m[j] = static_cast<T>(mj);
      v[j] = static_cast<T>(vj);
      const double mhat = mj / bc1;
      const double vhat = vj / bc2;
      w[j] = static_cast<T>(static_cast<double>(w[j]) -
                            state.learning_rate * mhat / (std::sqrt(vhat) + state.epsilon));
    }
  }
}

// Binds ParamSet entries into a Graph as gradient-tracked leaves, and copies
// the resulting gradients back out after backward().
template <typename T>
class ParamBinder {
 public:
  ParamBinder(Graph<T>& g, ParamSet<T>& params, bool track_gradients = true)
      : g_(g), params_(params), track_(track_gradients) {}

  NodeId operator()(const std::string& name) {
    auto it = bound_.find(name);
    if (it != bound_.end()) return it->second;
    NodeId id = g_.leaf(params_.value(name), track_);
    bound_[name] = id;
    return id;
  }

  void collect_grads() {
    for (const auto& [name, id] : bound_)
      params_.accumulate_grad(name, g_.grad(id));
  }

 private:
  Graph<T>& g_;
  ParamSet<T>& params_;
  bool track_;
  std::unordered_map<std::string, NodeId> bound_;
};

// Runs the reverse pass and deposits gradients into the ParamSet. Parameters
// the loss does not depend on receive zero gradient.
template <typename T>
void backward(Graph<T>& g, NodeId loss, ParamBinder<T>& binder) {
  g.backward(loss);
  binder.collect_grads();
}

}  // namespace phq
