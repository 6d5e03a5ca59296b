#pragma once

#include "lfhybrid/light_field.hpp"

namespace lfhybrid {

/// Parallax-structure residual: how strongly a light field violates the
/// constraint that all projections of one Lambertian scene point carry the
/// same value.
///
/// For every non-occluded central-view pixel (y, x) with disparity d, the
/// point is sampled bicubically in every view at
/// (y - d*(u-u0), x - d*(v-v0)); the residual is the largest spread
/// (max - min over views, i.e. the max pairwise difference) over all such
/// pixels and channels. Zero for a perfectly consistent light field.
///
/// `gt_disparity` is a single-channel H x W map over the central view;
/// `occlusion_mask` marks pixels to skip with values > 0.5 (pass an
/// all-zero mask to check everywhere). Returns +infinity if every pixel is
/// masked.
float structure_residual(const LightField& lf, const Image& gt_disparity,
                         const Image& occlusion_mask);

}  // namespace lfhybrid
