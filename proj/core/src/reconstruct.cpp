#include "lfhybrid/reconstruct.hpp"

#include <chrono>

#include "lfhybrid/convert.hpp"
#include "lfhybrid/resample.hpp"

namespace lfhybrid {

ReconstructResult reconstruct(Model<float>& model, const HybridInput& hybrid) {
  const auto start = std::chrono::steady_clock::now();
  Graph<float> g;
  const ModelForwardIds ids = model_forward(g, model, hybrid);

  ReconstructResult result;
  std::vector<Image> fused;
  for (size_t i = 0; i < ids.fusion.fused.size(); ++i) {
    fused.push_back(image_from_tensor(g.value(ids.fusion.fused[i])));
    result.sr_views.push_back(image_from_tensor(g.value(ids.sr.views[i])));
    result.warp_views.push_back(image_from_tensor(g.value(ids.warp.views[i])));
    result.attn_sr.push_back(image_from_tensor(g.value(ids.fusion.attn_sr[i])));
    result.d_h.maps.push_back(image_from_tensor(g.value(ids.warp.d_h[i])));
  }
  result.d_h.rows = hybrid.rows;
  result.d_h.cols = hybrid.cols;
  result.output = assemble_output(fused, hybrid);
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

LightField bicubic_baseline(const HybridInput& hybrid) {
  std::vector<Image> upsampled;
  for (const Image& view : hybrid.side_views)
    upsampled.push_back(
        bicubic_resize(view, hybrid.central_hr.height, hybrid.central_hr.width));
  return assemble_output(upsampled, hybrid);
}

}  // namespace lfhybrid
