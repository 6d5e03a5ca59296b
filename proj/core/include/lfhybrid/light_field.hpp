#pragma once

#include <vector>

#include "lfhybrid/image.hpp"

namespace lfhybrid {

/// 1-based angular coordinate (u = grid row in [1,M], v = grid column in [1,N]).
struct AngularCoord {
  int u = 0;
  int v = 0;
  bool operator==(const AngularCoord&) const = default;
};

/// Light field: an M x N grid of equally sized views. M and N are odd so a
/// unique central view exists at ((M+1)/2, (N+1)/2).
///
/// Axis convention used throughout: image rows pair with the angular row
/// index u and image columns pair with the angular column index v. A scene
/// point with disparity d seen at pixel (row, col) of the central view
/// appears at (row - d*(u-u0), col - d*(v-v0)) in view (u, v).
struct LightField {
  int rows = 0;  // M
  int cols = 0;  // N
  std::vector<Image> views;  // row-major over (u, v)

  AngularCoord central() const { return {(rows + 1) / 2, (cols + 1) / 2}; }

  Image& view(int u, int v) { return views[static_cast<size_t>(u - 1) * cols + (v - 1)]; }
  const Image& view(int u, int v) const {
    return views[static_cast<size_t>(u - 1) * cols + (v - 1)];
  }
  Image& view(AngularCoord a) { return view(a.u, a.v); }
  const Image& view(AngularCoord a) const { return view(a.u, a.v); }

  int height() const { return views.empty() ? 0 : views[0].height; }
  int width() const { return views.empty() ? 0 : views[0].width; }
  int channels() const { return views.empty() ? 0 : views[0].channels; }
};

/// Validates the grid and builds a LightField. `grid` is row-major over (u,v).
/// Throws std::invalid_argument on even M or N, empty grid, or view size
/// mismatch.
LightField make_light_field(std::vector<Image> grid, int rows, int cols);

/// Angular coordinates of all side views (everything except the center),
/// row-major. Size M*N - 1.
std::vector<AngularCoord> side_coords(int rows, int cols);

/// Hybrid capture: one HR central view at scale alpha plus the M*N-1 LR side
/// views in row-major angular order.
struct HybridInput {
  int rows = 0;
  int cols = 0;
  int scale = 1;  // alpha
  Image central_hr;               // (alpha*H) x (alpha*W)
  std::vector<Image> side_views;  // each H x W, order matches side_coords()

  AngularCoord central() const { return {(rows + 1) / 2, (cols + 1) / 2}; }
  int lr_height() const { return side_views.empty() ? 0 : side_views[0].height; }
  int lr_width() const { return side_views.empty() ? 0 : side_views[0].width; }
};

/// Validates central/side dimensions (central must be exactly scale x side)
/// and view count. Throws std::invalid_argument on violation.
HybridInput make_hybrid_input(Image central_hr, std::vector<Image> side_views,
                              int rows, int cols, int scale);

/// Per-side-view scalar disparity maps at HR resolution, in HR pixels of
/// shift per unit angular step. Order matches side_coords(rows, cols).
struct DisparityField {
  int rows = 0;
  int cols = 0;
  std::vector<Image> maps;  // single channel each

  Image& map(size_t side_index) { return maps[side_index]; }
  const Image& map(size_t side_index) const { return maps[side_index]; }
};

}  // namespace lfhybrid
