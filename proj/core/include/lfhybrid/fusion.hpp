#pragma once

#include <vector>

#include "lfhybrid/graph.hpp"
#include "lfhybrid/light_field.hpp"

namespace lfhybrid {

struct LossWeights {
  double lambda = 150.0;  // edge weight in the smoothness term
  double gamma = 0.1;     // smoothness weight in the total loss
};

/// Per-view attention-guided fusion results (graph ids).
struct FusionIds {
  std::vector<int> fused;
  std::vector<int> attn_sr;    // normalized attention for the regression branch
  std::vector<int> attn_warp;  // normalized attention for the warping branch
};

/// fused_u = sr_u * softmax(sr_logit_u) + warp_u * softmax(warp_logit_u),
/// pixel-wise; the two normalized maps sum to 1.
template <typename T>
FusionIds fuse(Graph<T>& g, const std::vector<int>& sr_views,
               const std::vector<int>& warp_views,
               const std::vector<int>& sr_logits,
               const std::vector<int>& warp_logits);

/// Full M x N light field from the fused side views; the central slot is the
/// HR central input, passed through bit-exactly.
LightField assemble_output(const std::vector<Image>& fused_side_views,
                           const HybridInput& hybrid);

/// All training loss terms (graph ids, each scalar).
struct LossIds {
  int fusion = -1;
  int sr = -1;
  int warp = -1;
  int smooth = -1;
  int total = -1;
};

/// total = l1(fused) + l1(sr) + l1(warp) + gamma * smoothness, each term
/// mean-normalized over side views and pixels. `gt_views` are constants; the
/// smoothness edge image for view u is its ground-truth view.
template <typename T>
LossIds total_loss(Graph<T>& g, const std::vector<int>& fused_views,
                   const std::vector<int>& sr_views,
                   const std::vector<int>& warp_views,
                   const std::vector<int>& d_h,
                   const std::vector<int>& gt_views, const LossWeights& weights);

}  // namespace lfhybrid
