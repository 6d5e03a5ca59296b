#include "lfhybrid/model.hpp"

#include <stdexcept>

#include "lfhybrid/convert.hpp"
#include "lfhybrid/resample.hpp"

namespace lfhybrid {

void ModelConfig::validate() const {
  if (rows < 1 || cols < 1 || rows % 2 == 0 || cols % 2 == 0)
    throw std::invalid_argument("angular dimensions must be odd");
  if (sr.scale != scale || warp.scale != scale)
    throw std::invalid_argument("branch scales must match the model scale");
  sr.validate();
  warp.validate();
}

template <typename T>
Model<T> Model<T>::init(const ModelConfig& cfg, uint64_t seed) {
  cfg.validate();
  Rng rng(seed);
  Model<T> m;
  m.cfg = cfg;
  m.srnet = SRNetParams<T>::init(cfg.sr, cfg.num_side_views(), rng);
  m.warpnet = WarpNetParams<T>::init(cfg.warp, cfg.num_side_views(), rng);
  return m;
}

template <typename T>
Model<T> Model<T>::zeros(const ModelConfig& cfg) {
  cfg.validate();
  Model<T> m;
  m.cfg = cfg;
  m.srnet = SRNetParams<T>::zeros(cfg.sr, cfg.num_side_views());
  m.warpnet = WarpNetParams<T>::zeros(cfg.warp, cfg.num_side_views());
  return m;
}

template <typename T>
void Model<T>::visit_params(const ParamVisitor<T>& fn) {
  srnet.visit("srnet.", fn);
  warpnet.visit("warpnet.", fn);
}

template <typename T>
size_t Model<T>::num_params() {
  size_t n = 0;
  visit_params([&n](const std::string&, Tensor<T>& t) { n += t.size(); });
  return n;
}

template <typename T>
ModelForwardIds model_forward(Graph<T>& g, Model<T>& model,
                              const HybridInput& hybrid, const LightField* gt,
                              const LossWeights& weights) {
  const ModelConfig& cfg = model.cfg;
  if (hybrid.rows != cfg.rows || hybrid.cols != cfg.cols)
    throw std::invalid_argument("hybrid view grid does not match the model");
  if (hybrid.scale != cfg.scale)
    throw std::invalid_argument("hybrid scale does not match the model");
  if (hybrid.central_hr.channels != 1)
    throw std::invalid_argument("model forward expects single-channel input");

  const int side_stack = g.constant(stack_side_views<T>(hybrid));
  const int central = g.constant(tensor_from_image<T>(hybrid.central_hr));
  std::vector<int> bic_views;
  for (const Image& view : hybrid.side_views)
    bic_views.push_back(g.constant(tensor_from_image<T>(
        bicubic_resize(view, hybrid.central_hr.height, hybrid.central_hr.width))));

  ModelForwardIds out;
  out.sr = srnet_forward(g, model.srnet, cfg.sr, side_stack, central, bic_views);
  out.warp = warpnet_forward(g, model.warpnet, cfg.warp, side_stack, central,
                             side_coords(cfg.rows, cfg.cols), hybrid.central());
  out.fusion = fuse(g, out.sr.views, out.warp.views, out.sr.attn_logits,
                    out.warp.attn_logits);

  if (gt) {
    if (gt->rows != cfg.rows || gt->cols != cfg.cols ||
        gt->height() != hybrid.central_hr.height ||
        gt->width() != hybrid.central_hr.width || gt->channels() != 1)
      throw std::invalid_argument("ground truth does not match the hybrid input");
    for (const AngularCoord& a : side_coords(cfg.rows, cfg.cols))
      out.gt_views.push_back(g.constant(tensor_from_image<T>(gt->view(a))));
    out.losses = total_loss(g, out.fusion.fused, out.sr.views, out.warp.views,
                            out.warp.d_h, out.gt_views, weights);
  }
  return out;
}

template struct Model<float>;
template struct Model<double>;
template ModelForwardIds model_forward<float>(Graph<float>&, Model<float>&,
                                              const HybridInput&,
                                              const LightField*,
                                              const LossWeights&);
template ModelForwardIds model_forward<double>(Graph<double>&, Model<double>&,
                                               const HybridInput&,
                                               const LightField*,
                                               const LossWeights&);

}  // namespace lfhybrid
