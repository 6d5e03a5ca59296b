#include "lfhybrid/fusion.hpp"

#include <stdexcept>

#include "lfhybrid/srnet.hpp"

namespace lfhybrid {

template <typename T>
FusionIds fuse(Graph<T>& g, const std::vector<int>& sr_views,
               const std::vector<int>& warp_views,
               const std::vector<int>& sr_logits,
               const std::vector<int>& warp_logits) {
  const size_t n = sr_views.size();
  if (warp_views.size() != n || sr_logits.size() != n || warp_logits.size() != n)
    throw std::invalid_argument("fusion inputs must have one entry per side view");
  FusionIds out;
  for (size_t i = 0; i < n; ++i) {
    const auto [c_sr, c_warp] = g.softmax_pair(sr_logits[i], warp_logits[i]);
    out.attn_sr.push_back(c_sr);
    out.attn_warp.push_back(c_warp);
    out.fused.push_back(
        g.add(g.mul(sr_views[i], c_sr), g.mul(warp_views[i], c_warp)));
  }
  return out;
}

LightField assemble_output(const std::vector<Image>& fused_side_views,
                           const HybridInput& hybrid) {
  const auto coords = side_coords(hybrid.rows, hybrid.cols);
  if (fused_side_views.size() != coords.size())
    throw std::invalid_argument("missing side view in assembly");
  std::vector<Image> grid(static_cast<size_t>(hybrid.rows) * hybrid.cols);
  const AngularCoord u0 = hybrid.central();
  grid[static_cast<size_t>(u0.u - 1) * hybrid.cols + (u0.v - 1)] = hybrid.central_hr;
  for (size_t i = 0; i < coords.size(); ++i)
    grid[static_cast<size_t>(coords[i].u - 1) * hybrid.cols + (coords[i].v - 1)] =
        fused_side_views[i];
  return make_light_field(std::move(grid), hybrid.rows, hybrid.cols);
}

template <typename T>
LossIds total_loss(Graph<T>& g, const std::vector<int>& fused_views,
                   const std::vector<int>& sr_views,
                   const std::vector<int>& warp_views,
                   const std::vector<int>& d_h,
                   const std::vector<int>& gt_views, const LossWeights& weights) {
  const size_t n = gt_views.size();
  if (fused_views.size() != n || sr_views.size() != n || warp_views.size() != n ||
      d_h.size() != n)
    throw std::invalid_argument("loss inputs must have one entry per side view");
  LossIds ids;
  ids.fusion = branch_l1_loss(g, fused_views, gt_views);
  ids.sr = branch_l1_loss(g, sr_views, gt_views);
  ids.warp = branch_l1_loss(g, warp_views, gt_views);
  std::vector<int> smooth_terms;
  for (size_t i = 0; i < n; ++i)
    smooth_terms.push_back(g.smoothness_loss(d_h[i], gt_views[i], weights.lambda));
  ids.smooth = mean_scalars(g, smooth_terms);
  ids.total = g.add(g.add(ids.fusion, ids.sr),
                    g.add(ids.warp, g.scale(ids.smooth, weights.gamma)));
  return ids;
}

template FusionIds fuse<float>(Graph<float>&, const std::vector<int>&,
                               const std::vector<int>&, const std::vector<int>&,
                               const std::vector<int>&);
template FusionIds fuse<double>(Graph<double>&, const std::vector<int>&,
                                const std::vector<int>&, const std::vector<int>&,
                                const std::vector<int>&);
template LossIds total_loss<float>(Graph<float>&, const std::vector<int>&,
                                   const std::vector<int>&, const std::vector<int>&,
                                   const std::vector<int>&, const std::vector<int>&,
                                   const LossWeights&);
template LossIds total_loss<double>(Graph<double>&, const std::vector<int>&,
                                    const std::vector<int>&, const std::vector<int>&,
                                    const std::vector<int>&, const std::vector<int>&,
                                    const LossWeights&);

}  // namespace lfhybrid
