#pragma once

#include <vector>

#include "lfhybrid/blocks.hpp"
#include "lfhybrid/light_field.hpp"

namespace lfhybrid {

struct SRNetConfig {
  int base_width = 32;
  int dense_layers = 4;
  int growth = 16;
  int hr_layers = 4;
  int view_feat = 8;  // per-view channels of the upsampled LF features
  int scale = 2;      // alpha

  void validate() const;
};

/// Regression branch parameters. The fusion block, output head, and
/// attention head are shared across side views and applied per view.
template <typename T>
struct SRNetParams {
  ConvParam<T> conv_in;                // stacked side views -> width
  DenseBlockParams<T> lf_block;        // width -> width
  ConvParam<T> up_conv;                // width -> alpha^2 * views * view_feat
  std::vector<ConvParam<T>> hr_convs;  // 1 -> width -> ... (hr_layers convs)
  DenseBlockParams<T> fusion_block;    // view_feat + width -> width
  ConvParam<T> out_head;               // width -> 1 (residual, no activation)
  ConvParam<T> attn_head;              // width -> 1 (logits, no activation)

  static SRNetParams init(const SRNetConfig& cfg, int num_side_views, Rng& rng);
  static SRNetParams zeros(const SRNetConfig& cfg, int num_side_views);
  void visit(const std::string& prefix, const ParamVisitor<T>& fn);
};

/// Per-side-view graph outputs of one branch.
struct BranchIds {
  std::vector<int> views;
  std::vector<int> attn_logits;
};

/// Builds the regression branch onto `g`.
///   side_stack: (views, H, W) stacked LR side views (typically a constant)
///   central_hr: (1, aH, aW)
///   bic_views:  per side view, BIC-upsampled LR view (1, aH, aW) constants
/// Output views are residual + BIC; with all-zero parameters each output
/// view equals its bicubic-upsampled input exactly.
template <typename T>
BranchIds srnet_forward(Graph<T>& g, SRNetParams<T>& p, const SRNetConfig& cfg,
                        int side_stack, int central_hr,
                        const std::vector<int>& bic_views);

/// Mean of scalar graph values.
template <typename T>
int mean_scalars(Graph<T>& g, const std::vector<int>& ids);

/// Mean L1 over the side views: mean over views of mean |pred - gt|.
template <typename T>
int branch_l1_loss(Graph<T>& g, const std::vector<int>& pred_views,
                   const std::vector<int>& gt_views);

}  // namespace lfhybrid
