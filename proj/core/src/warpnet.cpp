#include "lfhybrid/warpnet.hpp"

#include <stdexcept>

namespace lfhybrid {

void WarpNetConfig::validate() const {
  if (scale != 1 && scale != 2 && scale != 4 && scale != 8)
    throw std::invalid_argument("scale must be one of {1,2,4,8}");
  if (base_width < 1 || unet_levels < 1 || dense_layers < 1 || growth < 1 ||
      refine_feat < 1)
    throw std::invalid_argument("network widths and depths must be >= 1");
}

template <typename T>
WarpNetParams<T> WarpNetParams<T>::init(const WarpNetConfig& cfg,
                                        int num_side_views, Rng& rng) {
  cfg.validate();
  const int W = cfg.base_width;
  WarpNetParams<T> p;
  p.enc_in = make_conv_param<T>(W, num_side_views, 3, rng);
  for (int l = 0; l + 1 < cfg.unet_levels; ++l) {
    const int wl = W << l, wn = W << (l + 1);
    p.enc_down.push_back(make_conv_param<T>(wn, wl, 3, rng));
    p.enc_conv.push_back(make_conv_param<T>(wn, wn, 3, rng));
    p.dec_up.push_back(make_conv_param<T>(4 * wl, wn, 3, rng));
    p.dec_conv.push_back(make_conv_param<T>(wl, 2 * wl, 3, rng));
  }
  p.disp_head = make_conv_param<T>(num_side_views, W, 3, rng);

  const int rf = cfg.refine_feat;
  p.disp_feat.push_back(make_conv_param<T>(rf, 1, 3, rng));
  p.disp_feat.push_back(make_conv_param<T>(rf, rf, 3, rng));
  p.hr_feat.push_back(make_conv_param<T>(rf, 1, 3, rng));
  p.hr_feat.push_back(make_conv_param<T>(rf, rf, 3, rng));
  p.refine_block = make_dense_block<T>(2 * rf, cfg.dense_layers, cfg.growth, W, rng);
  p.res_head = make_conv_param<T>(1, W, 3, rng);
  p.attn_head = make_conv_param<T>(1, W, 3, rng);
  return p;
}

template <typename T>
WarpNetParams<T> WarpNetParams<T>::zeros(const WarpNetConfig& cfg,
                                         int num_side_views) {
  Rng rng(0);
  WarpNetParams<T> p = init(cfg, num_side_views, rng);
  p.visit("", [](const std::string&, Tensor<T>& t) {
    std::fill(t.v.begin(), t.v.end(), T(0));
  });
  return p;
}

template <typename T>
void WarpNetParams<T>::visit(const std::string& prefix, const ParamVisitor<T>& fn) {
  enc_in.visit(prefix + "enc_in", fn);
  for (size_t i = 0; i < enc_down.size(); ++i) {
    enc_down[i].visit(prefix + "enc_down" + std::to_string(i), fn);
    enc_conv[i].visit(prefix + "enc_conv" + std::to_string(i), fn);
    dec_up[i].visit(prefix + "dec_up" + std::to_string(i), fn);
    dec_conv[i].visit(prefix + "dec_conv" + std::to_string(i), fn);
  }
  disp_head.visit(prefix + "disp_head", fn);
  for (size_t i = 0; i < disp_feat.size(); ++i)
    disp_feat[i].visit(prefix + "disp_feat" + std::to_string(i), fn);
  for (size_t i = 0; i < hr_feat.size(); ++i)
    hr_feat[i].visit(prefix + "hr_feat" + std::to_string(i), fn);
  refine_block.visit(prefix + "refine_block", fn);
  res_head.visit(prefix + "res_head", fn);
  attn_head.visit(prefix + "attn_head", fn);
}

template <typename T>
DisparityIds estimate_disparity(Graph<T>& g, WarpNetParams<T>& p,
                                const WarpNetConfig& cfg, int side_stack,
                                int central_hr) {
  const int n_views = g.value(side_stack).c;
  if (p.disp_head.out_channels() != n_views)
    throw std::invalid_argument("warpnet parameters do not match the view count");
  const int H = g.value(side_stack).h, W = g.value(side_stack).w;
  const int df = cfg.down_factor();
  const int ph = (df - H % df) % df, pw = (df - W % df) % df;

  int s = side_stack;
  if (ph > 0 || pw > 0) s = g.pad_reflect(s, ph, pw);
  s = g.leaky_relu(apply_conv(g, s, p.enc_in), kLeakySlope);

  std::vector<int> skips{s};
  for (size_t l = 0; l < p.enc_down.size(); ++l) {
    s = g.leaky_relu(apply_conv(g, s, p.enc_down[l], /*stride=*/2), kLeakySlope);
    s = g.leaky_relu(apply_conv(g, s, p.enc_conv[l]), kLeakySlope);
    skips.push_back(s);
  }
  for (size_t l = p.enc_down.size(); l-- > 0;) {
    int up = g.leaky_relu(apply_conv(g, s, p.dec_up[l]), kLeakySlope);
    up = g.pixel_shuffle(up, 2);
    s = g.leaky_relu(apply_conv(g, g.concat({up, skips[l]}), p.dec_conv[l]),
                     kLeakySlope);
  }
  int lr_disp = apply_conv(g, s, p.disp_head);
  if (ph > 0 || pw > 0) lr_disp = g.crop_top_left(lr_disp, H, W);
  // LR-grid disparities become HR disparities: upsample spatially and scale
  // the values by alpha.
  const int d_init_stack = g.upsample_bicubic(lr_disp, cfg.scale, /*scale_values=*/true);

  int f_hr = central_hr;
  for (ConvParam<T>& conv : p.hr_feat)
    f_hr = g.leaky_relu(apply_conv(g, f_hr, conv), kLeakySlope);

  DisparityIds out;
  for (int i = 0; i < n_views; ++i) {
    const int d_init = g.slice_channels(d_init_stack, i, i + 1);
    int f_d = d_init;
    for (ConvParam<T>& conv : p.disp_feat)
      f_d = g.leaky_relu(apply_conv(g, f_d, conv), kLeakySlope);
    const int fused = dense_block(g, g.concat({f_d, f_hr}), p.refine_block);
    const int residual = apply_conv(g, fused, p.res_head);
    out.d_init.push_back(d_init);
    out.d_h.push_back(g.add(d_init, residual));
    out.refine_feats.push_back(fused);
  }
  return out;
}

template <typename T>
WarpBranchIds warpnet_forward(Graph<T>& g, WarpNetParams<T>& p,
                              const WarpNetConfig& cfg, int side_stack,
                              int central_hr,
                              const std::vector<AngularCoord>& coords,
                              AngularCoord central) {
  if (coords.size() != static_cast<size_t>(g.value(side_stack).c))
    throw std::invalid_argument("coordinate count does not match the side stack");
  DisparityIds disp = estimate_disparity(g, p, cfg, side_stack, central_hr);
  WarpBranchIds out;
  out.d_h = disp.d_h;
  for (size_t i = 0; i < coords.size(); ++i) {
    const double du = coords[i].u - central.u;
    const double dv = coords[i].v - central.v;
    out.views.push_back(g.warp_bicubic(central_hr, disp.d_h[i], du, dv));
    out.attn_logits.push_back(apply_conv(g, disp.refine_feats[i], p.attn_head));
  }
  return out;
}

template struct WarpNetParams<float>;
template struct WarpNetParams<double>;
template DisparityIds estimate_disparity<float>(Graph<float>&, WarpNetParams<float>&,
                                                const WarpNetConfig&, int, int);
template DisparityIds estimate_disparity<double>(Graph<double>&,
                                                 WarpNetParams<double>&,
                                                 const WarpNetConfig&, int, int);
template WarpBranchIds warpnet_forward<float>(Graph<float>&, WarpNetParams<float>&,
                                              const WarpNetConfig&, int, int,
                                              const std::vector<AngularCoord>&,
                                              AngularCoord);
template WarpBranchIds warpnet_forward<double>(Graph<double>&, WarpNetParams<double>&,
                                               const WarpNetConfig&, int, int,
                                               const std::vector<AngularCoord>&,
                                               AngularCoord);

}  // namespace lfhybrid
