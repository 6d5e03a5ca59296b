#pragma once

#include <string>

#include "lfhybrid/fusion.hpp"
#include "lfhybrid/srnet.hpp"
#include "lfhybrid/warpnet.hpp"

namespace lfhybrid {

struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ModelConfig {
  int rows = 3;
  int cols = 3;
  int scale = 2;
  SRNetConfig sr;
  WarpNetConfig warp;

  int num_side_views() const { return rows * cols - 1; }
  void validate() const;
};

/// Both branches plus the fusion heads; the complete trainable state.
template <typename T>
struct Model {
  ModelConfig cfg;
  SRNetParams<T> srnet;
  WarpNetParams<T> warpnet;

  static Model init(const ModelConfig& cfg, uint64_t seed);
  static Model zeros(const ModelConfig& cfg);
  void visit_params(const ParamVisitor<T>& fn);
  size_t num_params();
};

/// Ids of everything the full forward pass produces. Loss ids are only set
/// when a ground truth is supplied.
struct ModelForwardIds {
  BranchIds sr;
  WarpBranchIds warp;
  FusionIds fusion;
  std::vector<int> gt_views;
  LossIds losses;
};

/// Runs both branches and the fusion on a single-channel hybrid input.
/// When `gt` is non-null its side views become loss targets (and smoothness
/// edge images). Throws std::invalid_argument if the hybrid does not match
/// the model configuration.
template <typename T>
ModelForwardIds model_forward(Graph<T>& g, Model<T>& model,
                              const HybridInput& hybrid,
                              const LightField* gt = nullptr,
                              const LossWeights& weights = {});

}  // namespace lfhybrid
