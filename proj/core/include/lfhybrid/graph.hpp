#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "lfhybrid/tensor.hpp"

namespace lfhybrid {

/// Define-by-run reverse-mode graph over Tensor<T>. Builder methods compute
/// the forward result immediately and append a node; creation order is the
/// topological order, and backward() walks it in reverse. One Graph instance
/// is single-threaded; independent instances may run concurrently.
///
/// Tensors registered via leaf() stay owned by the caller and their
/// gradients accumulate across backward passes (zero them between
/// iterations). constant() copies the tensor into the graph and never
/// receives gradients.
template <typename T>
class Graph {
 public:
  Graph();
  ~Graph();
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  int leaf(Tensor<T>& t);
  int constant(Tensor<T> t);

  /// Cross-correlation with bias. Weight shape (out_c, in_c, k*k) with k in
  /// {1,3}; 3x3 uses zero padding 1, 1x1 no padding. Stride 1 or 2 (1x1 is
  /// stride-1 only).
  int conv2d(int x, int weight, int bias, int stride = 1);

  int concat(const std::vector<int>& xs);
  int add(int a, int b);
  int mul(int a, int b);
  int leaky_relu(int x, double slope = 0.1);
  int pixel_shuffle(int x, int scale);

  /// Catmull-Rom upsampling by an integer factor (same kernel and mapping as
  /// bicubic_resize). With scale_values, output values are also multiplied
  /// by `scale` -- used for disparity maps estimated on the LR grid so the
  /// result is expressed in HR pixels.
  int upsample_bicubic(int x, int scale, bool scale_values = false);

  /// Inverse warp: out(c, y, x) = img(c, y + disp(y,x)*du, x + disp(y,x)*dv),
  /// sampled bicubically with edge clamp. disp is (1, h, w) matching img's
  /// spatial dims. Differentiable w.r.t. both img and disp.
  int warp_bicubic(int img, int disp, double du, double dv);

  /// Numerically stable two-way softmax, pixel-wise. Outputs sum to 1.
  std::pair<int, int> softmax_pair(int a, int b);

  int slice_channels(int x, int c_begin, int c_end);  // [c_begin, c_end)
  int pad_reflect(int x, int pad_bottom, int pad_right);
  int crop_top_left(int x, int out_h, int out_w);

  /// Mean absolute error, scalar output (1,1,1).
  int l1_loss(int pred, int target);

  /// Edge-aware smoothness penalty on a (1,h,w) disparity map:
  /// mean over pixels of 1/2 * [exp(-lambda*|dI/dx|)*|dD/dx| +
  /// exp(-lambda*|dI/dy|)*|dD/dy|], forward differences, zero at the last
  /// row/column. `edge` must be a no-grad tensor (channel 0 is used).
  int smoothness_loss(int disp, int edge, double lambda);

  int sum(int x);             // scalar sum
  int scale(int x, double s); // s * x

  const Tensor<T>& value(int id) const;
  bool needs_grad(int id) const;
  size_t num_nodes() const;

  /// Seeds d(output)=1 (output must be scalar) and accumulates gradients
  /// into every upstream tensor that needs them. Intermediate gradients are
  /// reset first; leaf gradients accumulate.
  void backward(int output);

  /// Grad buffer for accumulation during backward; allocates the buffer and
  /// marks grad_touched. Used by op nodes.
  Tensor<T>& grad_target(int id);

  struct Node;

 private:
  struct Slot {
    Tensor<T>* t = nullptr;
    std::unique_ptr<Tensor<T>> owned;
    bool needs_grad = true;
    int producer = -1;
  };

  int add_slot_external(Tensor<T>& t, bool needs_grad);
  int add_slot_owned(Tensor<T> t, bool needs_grad, int producer);
  Tensor<T>& tensor(int id) { return *slots_[id].t; }

  std::vector<Slot> slots_;
  std::vector<std::unique_ptr<Node>> nodes_;
};

using GraphF = Graph<float>;
using GraphD = Graph<double>;

}  // namespace lfhybrid
