#include "lfhybrid/blocks.hpp"

#include <cmath>

namespace lfhybrid {

template <typename T>
ConvParam<T> make_conv_param(int out_c, int in_c, int k, Rng& rng) {
  ConvParam<T> p;
  p.w = Tensor<T>(out_c, in_c, k * k);
  p.b = Tensor<T>(out_c, 1, 1);
  const double fan_in = static_cast<double>(in_c) * k * k;
  const double gain = std::sqrt(2.0 / (1.0 + kLeakySlope * kLeakySlope));
  const double bound = gain * std::sqrt(3.0 / fan_in);
  for (T& v : p.w.v) v = static_cast<T>(rng.uniform(-bound, bound));
  return p;
}

template <typename T>
ConvParam<T> make_zero_conv_param(int out_c, int in_c, int k) {
  ConvParam<T> p;
  p.w = Tensor<T>(out_c, in_c, k * k);
  p.b = Tensor<T>(out_c, 1, 1);
  return p;
}

template <typename T>
int apply_conv(Graph<T>& g, int x, ConvParam<T>& p, int stride) {
  return g.conv2d(x, g.leaf(p.w), g.leaf(p.b), stride);
}

template <typename T>
DenseBlockParams<T> make_dense_block(int in_c, int num_layers, int growth,
                                     int out_c, Rng& rng) {
  DenseBlockParams<T> p;
  int width = in_c;
  for (int i = 0; i < num_layers; ++i) {
    p.layers.push_back(make_conv_param<T>(growth, width, 3, rng));
    width += growth;
  }
  p.bottleneck = make_conv_param<T>(out_c, width, 1, rng);
  return p;
}

template <typename T>
int dense_block(Graph<T>& g, int x, DenseBlockParams<T>& p) {
  std::vector<int> feats{x};
  for (ConvParam<T>& layer : p.layers) {
    const int in = feats.size() == 1 ? feats[0] : g.concat(feats);
    feats.push_back(g.leaky_relu(apply_conv(g, in, layer), kLeakySlope));
  }
  return apply_conv(g, g.concat(feats), p.bottleneck);
}

template ConvParam<float> make_conv_param<float>(int, int, int, Rng&);
template ConvParam<double> make_conv_param<double>(int, int, int, Rng&);
template ConvParam<float> make_zero_conv_param<float>(int, int, int);
template ConvParam<double> make_zero_conv_param<double>(int, int, int);
template int apply_conv<float>(Graph<float>&, int, ConvParam<float>&, int);
template int apply_conv<double>(Graph<double>&, int, ConvParam<double>&, int);
template DenseBlockParams<float> make_dense_block<float>(int, int, int, int, Rng&);
template DenseBlockParams<double> make_dense_block<double>(int, int, int, int, Rng&);
template int dense_block<float>(Graph<float>&, int, DenseBlockParams<float>&);
template int dense_block<double>(Graph<double>&, int, DenseBlockParams<double>&);

}  // namespace lfhybrid
