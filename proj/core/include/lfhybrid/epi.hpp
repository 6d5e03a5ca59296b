#pragma once

#include "lfhybrid/light_field.hpp"

namespace lfhybrid {

enum class EpiOrientation { horizontal, vertical };

/// Epipolar-plane image slice.
///
/// horizontal: fix the angular row `angular_index` (u, 1-based) and the image
/// row `spatial_line` (0-based); stack that row from views v = 1..N.
/// Result is N x W (x channels).
///
/// vertical: fix the angular column (v) and the image column; stack that
/// column from views u = 1..M. Result is M x H.
///
/// Throws std::out_of_range for indices outside the light field.
Image extract_epi(const LightField& lf, EpiOrientation orientation,
                  int angular_index, int spatial_line);

}  // namespace lfhybrid
