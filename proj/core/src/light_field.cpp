#include "lfhybrid/light_field.hpp"

#include <stdexcept>

namespace lfhybrid {

LightField make_light_field(std::vector<Image> grid, int rows, int cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("empty view grid");
  if (rows % 2 == 0 || cols % 2 == 0)
    throw std::invalid_argument("angular dimensions must be odd");
  if (grid.size() != static_cast<size_t>(rows) * cols)
    throw std::invalid_argument("view count does not match grid dimensions");
  const Image& first = grid[0];
  if (first.empty()) throw std::invalid_argument("views must be non-empty");
  for (const Image& img : grid) {
    if (!img.same_shape(first)) throw std::invalid_argument("view size mismatch");
    if (!all_finite(img)) throw std::invalid_argument("view contains non-finite values");
  }
  LightField lf;
  lf.rows = rows;
  lf.cols = cols;
  lf.views = std::move(grid);
  return lf;
}

std::vector<AngularCoord> side_coords(int rows, int cols) {
  std::vector<AngularCoord> out;
  out.reserve(static_cast<size_t>(rows) * cols - 1);
  const int u0 = (rows + 1) / 2, v0 = (cols + 1) / 2;
  for (int u = 1; u <= rows; ++u)
    for (int v = 1; v <= cols; ++v)
      if (!(u == u0 && v == v0)) out.push_back({u, v});
  return out;
}

HybridInput make_hybrid_input(Image central_hr, std::vector<Image> side_views,
                              int rows, int cols, int scale) {
  if (rows < 1 || cols < 1 || rows % 2 == 0 || cols % 2 == 0)
    throw std::invalid_argument("angular dimensions must be odd");
  if (scale < 1) throw std::invalid_argument("scale must be >= 1");
  if (side_views.size() != static_cast<size_t>(rows) * cols - 1)
    throw std::invalid_argument("side view count must be M*N-1");
  const Image& first = side_views[0];
  for (const Image& img : side_views)
    if (!img.same_shape(first)) throw std::invalid_argument("view size mismatch");
  if (central_hr.height != scale * first.height ||
      central_hr.width != scale * first.width ||
      central_hr.channels != first.channels)
    throw std::invalid_argument(
        "central view must be exactly scale x the side view dimensions");
  HybridInput h;
  h.rows = rows;
  h.cols = cols;
  h.scale = scale;
  h.central_hr = std::move(central_hr);
  h.side_views = std::move(side_views);
  return h;
}

}  // namespace lfhybrid
