#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "lfhybrid/adam.hpp"
#include "lfhybrid/model.hpp"

namespace lfhybrid {

// Versioned binary container, little-endian throughout: magic "LFHB",
// format version, a key=value config block, named parameter tensors
// (name, shape, float32 data), and optionally the Adam state (step counter
// plus both moment buffers per tensor, in the same order).

void save_checkpoint(const std::string& path, Model<float>& model,
                     const AdamOptimizer<float>* optimizer = nullptr);

struct LoadedCheckpoint {
  Model<float> model;
  bool has_optimizer_state = false;
  uint64_t optimizer_steps = 0;
  /// Per tensor name: {first moment, second moment}. Empty unless
  /// has_optimizer_state.
  std::vector<std::pair<std::string, std::array<std::vector<float>, 2>>> moments;
};

/// Throws std::runtime_error on a bad magic ("not a checkpoint"), version
/// mismatch, truncation, or unknown/missing tensor names. With
/// `require_optimizer_state`, refuses checkpoints saved without it.
LoadedCheckpoint load_checkpoint(const std::string& path,
                                 bool require_optimizer_state = false);

/// Rebuilds an Adam optimizer over `model` (which must be the model loaded
/// from `ck`, wherever it now lives) with the saved moments and step count.
AdamOptimizer<float> bind_optimizer(Model<float>& model,
                                    const LoadedCheckpoint& ck,
                                    AdamConfig cfg = {});

/// Optimizer over every parameter of the model, in visit order.
template <typename T>
AdamOptimizer<T> make_optimizer(Model<T>& model, AdamConfig cfg = {}) {
  std::vector<Tensor<T>*> params;
  model.visit_params(
      [&params](const std::string&, Tensor<T>& t) { params.push_back(&t); });
  return AdamOptimizer<T>(std::move(params), cfg);
}

}  // namespace lfhybrid
