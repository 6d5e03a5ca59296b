#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace lfhybrid {

/// Value + gradient buffer for differentiable computation. Shape is
/// (channels, height, width); flat parameter vectors use (n, 1, 1).
/// Gradients are lazily allocated and accumulate across backward passes
/// until zero_grad().
template <typename T>
struct Tensor {
  int c = 0, h = 0, w = 0;
  std::vector<T> v;
  std::vector<T> g;
  /// Set when a backward pass accumulates into g; cleared by zero_grad().
  bool grad_touched = false;

  Tensor() = default;
  Tensor(int c_, int h_, int w_, T fill = T(0))
      : c(c_), h(h_), w(w_), v(static_cast<size_t>(c_) * h_ * w_, fill) {
    if (c_ < 1 || h_ < 1 || w_ < 1)
      throw std::invalid_argument("tensor dimensions must be positive");
  }

  size_t size() const { return v.size(); }
  bool same_shape(const Tensor& o) const { return c == o.c && h == o.h && w == o.w; }

  T& at(int ci, int y, int x) {
    return v[(static_cast<size_t>(ci) * h + y) * w + x];
  }
  T at(int ci, int y, int x) const {
    return v[(static_cast<size_t>(ci) * h + y) * w + x];
  }

  T* chan(int ci) { return v.data() + static_cast<size_t>(ci) * h * w; }
  const T* chan(int ci) const { return v.data() + static_cast<size_t>(ci) * h * w; }

  void ensure_grad() {
    if (g.size() != v.size()) g.assign(v.size(), T(0));
  }
  T* grad_chan(int ci) { return g.data() + static_cast<size_t>(ci) * h * w; }

  void zero_grad() {
    g.assign(v.size(), T(0));
    grad_touched = false;
  }

  bool values_finite() const {
    for (T x : v)
      if (!std::isfinite(static_cast<double>(x))) return false;
    return true;
  }
};

}  // namespace lfhybrid
