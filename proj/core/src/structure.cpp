#include "lfhybrid/structure.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "lfhybrid/resample.hpp"

namespace lfhybrid {

float structure_residual(const LightField& lf, const Image& gt_disparity,
                         const Image& occlusion_mask) {
  const int H = lf.height(), W = lf.width(), C = lf.channels();
  if (gt_disparity.channels != 1 || gt_disparity.height != H ||
      gt_disparity.width != W)
    throw std::invalid_argument("disparity map must be 1 x H x W");
  if (occlusion_mask.channels != 1 || occlusion_mask.height != H ||
      occlusion_mask.width != W)
    throw std::invalid_argument("occlusion mask must be 1 x H x W");

  const AngularCoord u0 = lf.central();
  float worst = -1.0f;
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      if (occlusion_mask.at(0, y, x) > 0.5f) continue;
      const double d = gt_disparity.at(0, y, x);
      for (int c = 0; c < C; ++c) {
        float lo = std::numeric_limits<float>::max();
        float hi = std::numeric_limits<float>::lowest();
        for (int u = 1; u <= lf.rows; ++u) {
          for (int v = 1; v <= lf.cols; ++v) {
            const float s = bicubic_sample(lf.view(u, v), c,
                                           y - d * (u - u0.u),
                                           x - d * (v - u0.v));
            lo = std::min(lo, s);
            hi = std::max(hi, s);
          }
        }
        worst = std::max(worst, hi - lo);
      }
    }
  }
  if (worst < 0.0f) return std::numeric_limits<float>::infinity();
  return worst;
}

}  // namespace lfhybrid
