#pragma once

#include <vector>

#include "lfhybrid/blocks.hpp"
#include "lfhybrid/light_field.hpp"

namespace lfhybrid {

struct WarpNetConfig {
  int base_width = 32;
  int unet_levels = 3;  // stride-2 scales; input padded if not divisible
  int dense_layers = 4;
  int growth = 16;
  int refine_feat = 16;  // width of the disparity / HR feature extractors
  int scale = 2;         // alpha

  void validate() const;
  int down_factor() const { return 1 << (unet_levels - 1); }
};

/// Warping branch parameters. The refinement stage (feature extractors,
/// dense block, heads) shares weights across side views.
template <typename T>
struct WarpNetParams {
  // U-Net over the stacked LR side views; widths double per level.
  ConvParam<T> enc_in;                 // views -> w
  std::vector<ConvParam<T>> enc_down;  // stride-2, w*2^l -> w*2^(l+1)
  std::vector<ConvParam<T>> enc_conv;  // same width
  std::vector<ConvParam<T>> dec_up;    // w*2^(l+1) -> 4*w*2^l (pixel shuffle x2)
  std::vector<ConvParam<T>> dec_conv;  // skip concat -> w*2^l
  ConvParam<T> disp_head;              // w -> views (one LR map per side view)

  std::vector<ConvParam<T>> disp_feat;  // 1 -> rf -> rf
  std::vector<ConvParam<T>> hr_feat;    // 1 -> rf -> rf
  DenseBlockParams<T> refine_block;     // 2*rf -> width
  ConvParam<T> res_head;                // width -> 1
  ConvParam<T> attn_head;               // width -> 1

  static WarpNetParams init(const WarpNetConfig& cfg, int num_side_views, Rng& rng);
  static WarpNetParams zeros(const WarpNetConfig& cfg, int num_side_views);
  void visit(const std::string& prefix, const ParamVisitor<T>& fn);
};

/// Disparity estimation outputs (graph ids), one per side view.
struct DisparityIds {
  std::vector<int> d_init;       // HR initial disparity (values scaled by alpha)
  std::vector<int> d_h;          // refined HR disparity
  std::vector<int> refine_feats; // fused refinement features (for the attention head)
};

/// U-Net over the stacked side views -> per-view LR disparity maps ->
/// bicubic upsampling (x alpha in value) -> per-view refinement using HR
/// central-view features. Inputs not divisible by 2^(levels-1) are
/// reflection-padded and the result cropped back.
template <typename T>
DisparityIds estimate_disparity(Graph<T>& g, WarpNetParams<T>& p,
                                const WarpNetConfig& cfg, int side_stack,
                                int central_hr);

struct WarpBranchIds {
  std::vector<int> views;
  std::vector<int> attn_logits;
  std::vector<int> d_h;
};

/// Full warping branch: estimate disparity, then synthesize each side view
/// by inversely warping the HR central view. `coords` are the side-view
/// angular coordinates; `central` the grid center.
template <typename T>
WarpBranchIds warpnet_forward(Graph<T>& g, WarpNetParams<T>& p,
                              const WarpNetConfig& cfg, int side_stack,
                              int central_hr,
                              const std::vector<AngularCoord>& coords,
                              AngularCoord central);

}  // namespace lfhybrid
