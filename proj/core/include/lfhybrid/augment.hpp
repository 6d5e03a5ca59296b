#pragma once

#include <cstdint>
#include <optional>

#include "lfhybrid/image.hpp"
#include "lfhybrid/light_field.hpp"

namespace lfhybrid {

/// Joint spatial/angular transforms that preserve the light-field parallax
/// structure. Flipping one spatial axis alone would negate every EPI slope;
/// reversing the paired angular axis at the same time restores it, so the
/// disparity values carry over unchanged:
///   flip_h:    mirror image rows      AND reverse the angular row order (u)
///   flip_v:    mirror image columns   AND reverse the angular column order (v)
///   transpose: swap (row, col)        AND swap (u, v)
enum class GeometricOp { flip_h, flip_v, transpose };

Image flip_image_rows(const Image& img);
Image flip_image_cols(const Image& img);
Image transpose_image(const Image& img);

LightField geometric_augment(const LightField& lf, GeometricOp op);

struct AugmentedScene {
  LightField lf;
  Image gt_disparity;
  Image occlusion_mask;
};

/// Also transforms the central-view disparity map (and optionally the
/// occlusion mask) consistently: the same spatial transform, values
/// unchanged.
AugmentedScene geometric_augment(const LightField& lf, const Image& gt_disparity,
                                 const Image* occlusion_mask, GeometricOp op);

struct ColorJitter {
  double brightness = 0.2;  // additive, +/- range
  double contrast = 0.2;    // slope change around mid gray, +/- range
  double saturation = 0.2;  // 3-channel inputs only
  double hue = 0.05;        // fraction of a full chroma rotation; 3-channel only
};

struct AugmentSpec {
  std::optional<GeometricOp> geometric;
  ColorJitter jitter;
  uint64_t seed = 0;
};

/// Independently jitters the brightness, contrast, saturation, and hue of
/// each side view (in that fixed order); the central view is returned
/// untouched. Deterministic for a fixed seed. Saturation and hue are no-ops
/// on single-channel views.
HybridInput color_augment(const HybridInput& hybrid, const ColorJitter& jitter,
                          uint64_t seed);

}  // namespace lfhybrid
