#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lfhybrid/graph.hpp"
#include "lfhybrid/rng.hpp"

namespace lfhybrid {

template <typename T>
using ParamVisitor = std::function<void(const std::string&, Tensor<T>&)>;

/// One convolution layer: weight (out_c, in_c, k*k) and bias (out_c, 1, 1).
template <typename T>
struct ConvParam {
  Tensor<T> w;
  Tensor<T> b;

  int out_channels() const { return w.c; }

  void visit(const std::string& prefix, const ParamVisitor<T>& fn) {
    fn(prefix + ".weight", w);
    fn(prefix + ".bias", b);
  }
};

/// Fan-in-scaled uniform init with gain matched to the leaky-ReLU slope 0.1;
/// biases zero.
template <typename T>
ConvParam<T> make_conv_param(int out_c, int in_c, int k, Rng& rng);

template <typename T>
ConvParam<T> make_zero_conv_param(int out_c, int in_c, int k);

template <typename T>
int apply_conv(Graph<T>& g, int x, ConvParam<T>& p, int stride = 1);

/// Densely connected block: layer i consumes the concatenation of the block
/// input and all previous layer outputs; a final 1x1 bottleneck maps the full
/// concatenation to `out_c`. Every 3x3 layer is followed by the activation,
/// the bottleneck is not.
template <typename T>
struct DenseBlockParams {
  std::vector<ConvParam<T>> layers;  // 3x3, `growth` output channels each
  ConvParam<T> bottleneck;           // 1x1 -> out_c

  void visit(const std::string& prefix, const ParamVisitor<T>& fn) {
    for (size_t i = 0; i < layers.size(); ++i)
      layers[i].visit(prefix + ".layer" + std::to_string(i), fn);
    bottleneck.visit(prefix + ".bottleneck", fn);
  }
};

template <typename T>
DenseBlockParams<T> make_dense_block(int in_c, int num_layers, int growth,
                                     int out_c, Rng& rng);

template <typename T>
int dense_block(Graph<T>& g, int x, DenseBlockParams<T>& p);

constexpr double kLeakySlope = 0.1;

}  // namespace lfhybrid
