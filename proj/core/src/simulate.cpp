#include "lfhybrid/simulate.hpp"

#include <stdexcept>

#include "lfhybrid/resample.hpp"

namespace lfhybrid {

HybridInput simulate_hybrid(const LightField& lf_hr, int scale) {
  if (scale < 1) throw std::invalid_argument("scale must be >= 1");
  if (lf_hr.height() % scale != 0 || lf_hr.width() % scale != 0)
    throw std::invalid_argument("view dimensions must be divisible by the scale");
  const int lh = lf_hr.height() / scale, lw = lf_hr.width() / scale;
  std::vector<Image> sides;
  sides.reserve(static_cast<size_t>(lf_hr.rows) * lf_hr.cols - 1);
  for (const AngularCoord& a : side_coords(lf_hr.rows, lf_hr.cols))
    sides.push_back(scale == 1 ? lf_hr.view(a)
                               : bicubic_resize(lf_hr.view(a), lh, lw));
  return make_hybrid_input(lf_hr.view(lf_hr.central()), std::move(sides),
                           lf_hr.rows, lf_hr.cols, scale);
}

namespace {
Image crop_image(const Image& img, int y0, int x0, int h, int w) {
  Image out(img.channels, h, w);
  for (int c = 0; c < img.channels; ++c)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) out.at(c, y, x) = img.at(c, y0 + y, x0 + x);
  return out;
}
}  // namespace

TrainingSample crop_patch(const LightField& lf_hr, const HybridInput& hybrid,
                          int size, int lr_row, int lr_col) {
  const int scale = hybrid.scale;
  if (size % scale != 0)
    throw std::invalid_argument("patch size must be divisible by the scale");
  const int lr_size = size / scale;
  if (lr_size < 1 || lr_row < 0 || lr_col < 0 ||
      lr_row + lr_size > hybrid.lr_height() || lr_col + lr_size > hybrid.lr_width())
    throw std::invalid_argument("patch does not fit inside the views");
  if (lf_hr.height() != scale * hybrid.lr_height() ||
      lf_hr.width() != scale * hybrid.lr_width())
    throw std::invalid_argument("light field does not match the hybrid input");

  TrainingSample sample;
  const int hy = scale * lr_row, hx = scale * lr_col;
  std::vector<Image> grid;
  grid.reserve(lf_hr.views.size());
  for (const Image& view : lf_hr.views)
    grid.push_back(crop_image(view, hy, hx, size, size));
  sample.gt = make_light_field(std::move(grid), lf_hr.rows, lf_hr.cols);

  std::vector<Image> sides;
  sides.reserve(hybrid.side_views.size());
  for (const Image& view : hybrid.side_views)
    sides.push_back(crop_image(view, lr_row, lr_col, lr_size, lr_size));
  sample.hybrid = make_hybrid_input(
      crop_image(hybrid.central_hr, hy, hx, size, size), std::move(sides),
      hybrid.rows, hybrid.cols, scale);
  return sample;
}

TrainingSample sample_patch(const LightField& lf_hr, const HybridInput& hybrid,
                            int size, Rng& rng) {
  const int scale = hybrid.scale;
  if (size % scale != 0)
    throw std::invalid_argument("patch size must be divisible by the scale");
  const int lr_size = size / scale;
  if (lr_size > hybrid.lr_height() || lr_size > hybrid.lr_width())
    throw std::invalid_argument("patch size too large");
  const int r = rng.range(0, hybrid.lr_height() - lr_size);
  const int c = rng.range(0, hybrid.lr_width() - lr_size);
  return crop_patch(lf_hr, hybrid, size, r, c);
}

}  // namespace lfhybrid
