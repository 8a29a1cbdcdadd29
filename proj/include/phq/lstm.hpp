// Stacked LSTM built from graph primitives, gate order (i, f, g, o).
// Parameters per layer L under `prefix`:
//   {prefix}.lstm{L}.wx  [in, 4H]   input-to-gate weights
//   {prefix}.lstm{L}.wh  [H, 4H]    hidden-to-gate weights
//   {prefix}.lstm{L}.b   [4H]       gate bias
#pragma once

#include <string>
#include <vector>

#include "phq/params.hpp"

namespace phq {

template <typename T>
void lstm_create_params(ParamSet<T>& params, const std::string& prefix, int layers,
                        long input_dim, long hidden, Rng& rng) {
  for (int l = 1; l <= layers; ++l) {
    const long in = l == 1 ? input_dim : hidden;
    const std::string base = prefix + ".lstm" + std::to_string(l);
    init_uniform(params.create(base + ".wx", {in, 4 * hidden}), in, 4 * hidden, rng);
    init_uniform(params.create(base + ".wh", {hidden, 4 * hidden}), hidden, 4 * hidden, rng);
    params.create(base + ".b", {4 * hidden});
  }
}

// Returns the top layer's hidden sequence [time, hidden]. inter_layer_dropout
// is applied to every layer output except the last (train mode only).
template <typename T>
NodeId lstm_forward(Graph<T>& g, NodeId input, int layers, long hidden,
                    ParamBinder<T>& pb, const std::string& prefix,
                    double inter_layer_dropout = 0.0) {
  if (layers < 1) throw Error(ErrorKind::kParameter, "lstm needs at least one layer");
  const Tensor<T>& in_val = g.value(input);
  if (in_val.rank() != 2)
    throw Error(ErrorKind::kDimension, "lstm input must be [time, features]");
  const long tlen = in_val.dim(0);

  NodeId seq = input;
  for (int l = 1; l <= layers; ++l) {
    const std::string base = prefix + ".lstm" + std::to_string(l);
    NodeId wx = pb(base + ".wx");
    NodeId wh = pb(base + ".wh");
    NodeId b = pb(base + ".b");
    if (g.value(wx).dim(0) != g.value(seq).cols())
      throw Error(ErrorKind::kDimension, "lstm layer " + std::to_string(l) +
                                             " input width mismatch");

    NodeId h = g.leaf(Tensor<T>({hidden}));
    NodeId c = g.leaf(Tensor<T>({hidden}));
    std::vector<NodeId> outputs;
    outputs.reserve(static_cast<std::size_t>(tlen));
    for (long t = 0; t < tlen; ++t) {
      NodeId xt = g.row(seq, t);
      NodeId gates = g.add_bias(g.add(g.matmul(xt, wx), g.matmul(h, wh)), b);
      NodeId gi = g.sigmoid(g.slice(gates, 0, hidden));
      NodeId gf = g.sigmoid(g.slice(gates, hidden, hidden));
      NodeId gg = g.tanh_(g.slice(gates, 2 * hidden, hidden));
      NodeId go = g.sigmoid(g.slice(gates, 3 * hidden, hidden));
      c = g.add(g.mul(gf, c), g.mul(gi, gg));
      h = g.mul(go, g.tanh_(c));
      outputs.push_back(h);
    }
    seq = g.stack_rows(outputs);
    if (l < layers && inter_layer_dropout > 0.0) seq = g.dropout(seq, inter_layer_dropout);
  }
  return seq;
}

}  // namespace phq
