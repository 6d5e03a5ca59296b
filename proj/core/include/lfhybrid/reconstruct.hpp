#pragma once

#include "lfhybrid/model.hpp"

namespace lfhybrid {

struct ReconstructResult {
  LightField output;             // fused side views + central passthrough
  std::vector<Image> sr_views;   // regression branch, per side view
  std::vector<Image> warp_views; // warping branch, per side view
  std::vector<Image> attn_sr;    // normalized regression-branch attention
  DisparityField d_h;            // refined HR disparity per side view
  double seconds = 0;
};

/// Runs both branches and the fusion on a single-channel hybrid input.
/// Deterministic given the model and input.
ReconstructResult reconstruct(Model<float>& model, const HybridInput& hybrid);

/// Reference output with no learning: every side view bicubic-upsampled to
/// HR, central view passed through.
LightField bicubic_baseline(const HybridInput& hybrid);

}  // namespace lfhybrid
