#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lfhybrid/tensor.hpp"

namespace lfhybrid {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Bias-corrected Adam over a fixed set of parameter tensors. The moment
/// buffers mirror the parameter shapes; `t` counts completed steps.
template <typename T>
class AdamOptimizer {
 public:
  AdamOptimizer() = default;
  AdamOptimizer(std::vector<Tensor<T>*> params, AdamConfig cfg = {});

  /// p -= lr * m_hat / (sqrt(v_hat) + eps) using the gradients currently in
  /// each tensor's grad buffer (missing buffers count as zero gradient).
  void step(double lr);

  void zero_grads();

  uint64_t steps() const { return t_; }
  const AdamConfig& config() const { return cfg_; }

  // Checkpoint plumbing: flat access to the moment buffers, in parameter
  // order.
  size_t num_params() const { return params_.size(); }
  std::vector<T>& moment1(size_t i) { return m_[i]; }
  std::vector<T>& moment2(size_t i) { return v_[i]; }
  void set_steps(uint64_t t) { t_ = t; }

 private:
  std::vector<Tensor<T>*> params_;
  std::vector<std::vector<T>> m_, v_;
  AdamConfig cfg_;
  uint64_t t_ = 0;
};

}  // namespace lfhybrid
