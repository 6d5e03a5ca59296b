#include "lfhybrid/srnet.hpp"

#include <stdexcept>

namespace lfhybrid {

void SRNetConfig::validate() const {
  if (scale != 1 && scale != 2 && scale != 4 && scale != 8)
    throw std::invalid_argument("scale must be one of {1,2,4,8}");
  if (base_width < 1 || growth < 1 || view_feat < 1 || dense_layers < 1 ||
      hr_layers < 1)
    throw std::invalid_argument("network widths and depths must be >= 1");
}

template <typename T>
SRNetParams<T> SRNetParams<T>::init(const SRNetConfig& cfg, int num_side_views,
                                    Rng& rng) {
  cfg.validate();
  const int W = cfg.base_width;
  SRNetParams<T> p;
  p.conv_in = make_conv_param<T>(W, num_side_views, 3, rng);
  p.lf_block = make_dense_block<T>(W, cfg.dense_layers, cfg.growth, W, rng);
  p.up_conv = make_conv_param<T>(cfg.scale * cfg.scale * num_side_views * cfg.view_feat,
                                 W, 3, rng);
  int in_c = 1;
  for (int i = 0; i < cfg.hr_layers; ++i) {
    p.hr_convs.push_back(make_conv_param<T>(W, in_c, 3, rng));
    in_c = W;
  }
  p.fusion_block =
      make_dense_block<T>(cfg.view_feat + W, cfg.dense_layers, cfg.growth, W, rng);
  p.out_head = make_conv_param<T>(1, W, 3, rng);
  p.attn_head = make_conv_param<T>(1, W, 3, rng);
  return p;
}

template <typename T>
SRNetParams<T> SRNetParams<T>::zeros(const SRNetConfig& cfg, int num_side_views) {
  Rng rng(0);
  SRNetParams<T> p = init(cfg, num_side_views, rng);
  p.visit("", [](const std::string&, Tensor<T>& t) {
    std::fill(t.v.begin(), t.v.end(), T(0));
  });
  return p;
}

template <typename T>
void SRNetParams<T>::visit(const std::string& prefix, const ParamVisitor<T>& fn) {
  conv_in.visit(prefix + "conv_in", fn);
  lf_block.visit(prefix + "lf_block", fn);
  up_conv.visit(prefix + "up_conv", fn);
  for (size_t i = 0; i < hr_convs.size(); ++i)
    hr_convs[i].visit(prefix + "hr_conv" + std::to_string(i), fn);
  fusion_block.visit(prefix + "fusion_block", fn);
  out_head.visit(prefix + "out_head", fn);
  attn_head.visit(prefix + "attn_head", fn);
}

template <typename T>
BranchIds srnet_forward(Graph<T>& g, SRNetParams<T>& p, const SRNetConfig& cfg,
                        int side_stack, int central_hr,
                        const std::vector<int>& bic_views) {
  const int n_views = g.value(side_stack).c;
  if (static_cast<int>(bic_views.size()) != n_views)
    throw std::invalid_argument("bicubic view count does not match the side stack");
  if (p.up_conv.out_channels() !=
      cfg.scale * cfg.scale * n_views * cfg.view_feat)
    throw std::invalid_argument("srnet parameters do not match the view count");

  // LF feature extraction on the stacked LR views, then sub-pixel upsampling
  // to per-view HR feature slices.
  int f = g.leaky_relu(apply_conv(g, side_stack, p.conv_in), kLeakySlope);
  f = dense_block(g, f, p.lf_block);
  int up = g.leaky_relu(apply_conv(g, f, p.up_conv), kLeakySlope);
  up = g.pixel_shuffle(up, cfg.scale);  // (views * view_feat, aH, aW)

  // HR feature extraction, repeated for every side view.
  int fh = central_hr;
  for (ConvParam<T>& conv : p.hr_convs)
    fh = g.leaky_relu(apply_conv(g, fh, conv), kLeakySlope);

  BranchIds out;
  for (int i = 0; i < n_views; ++i) {
    const int fl = g.slice_channels(up, i * cfg.view_feat, (i + 1) * cfg.view_feat);
    const int fused = dense_block(g, g.concat({fl, fh}), p.fusion_block);
    const int residual = apply_conv(g, fused, p.out_head);
    out.views.push_back(g.add(residual, bic_views[i]));
    out.attn_logits.push_back(apply_conv(g, fused, p.attn_head));
  }
  return out;
}

template <typename T>
int mean_scalars(Graph<T>& g, const std::vector<int>& ids) {
  if (ids.empty()) throw std::invalid_argument("mean of zero scalars");
  int acc = ids[0];
  for (size_t i = 1; i < ids.size(); ++i) acc = g.add(acc, ids[i]);
  return g.scale(acc, 1.0 / static_cast<double>(ids.size()));
}

template <typename T>
int branch_l1_loss(Graph<T>& g, const std::vector<int>& pred_views,
                   const std::vector<int>& gt_views) {
  if (pred_views.size() != gt_views.size())
    throw std::invalid_argument("view count mismatch in loss");
  std::vector<int> terms;
  for (size_t i = 0; i < pred_views.size(); ++i)
    terms.push_back(g.l1_loss(pred_views[i], gt_views[i]));
  return mean_scalars(g, terms);
}

template struct SRNetParams<float>;
template struct SRNetParams<double>;
template BranchIds srnet_forward<float>(Graph<float>&, SRNetParams<float>&,
                                        const SRNetConfig&, int, int,
                                        const std::vector<int>&);
template BranchIds srnet_forward<double>(Graph<double>&, SRNetParams<double>&,
                                         const SRNetConfig&, int, int,
                                         const std::vector<int>&);
template int mean_scalars<float>(Graph<float>&, const std::vector<int>&);
template int mean_scalars<double>(Graph<double>&, const std::vector<int>&);
template int branch_l1_loss<float>(Graph<float>&, const std::vector<int>&,
                                   const std::vector<int>&);
template int branch_l1_loss<double>(Graph<double>&, const std::vector<int>&,
                                    const std::vector<int>&);

}  // namespace lfhybrid
