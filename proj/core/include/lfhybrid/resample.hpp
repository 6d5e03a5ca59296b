#pragma once

#include <array>

#include "lfhybrid/image.hpp"

namespace lfhybrid {

// All bicubic paths in the project (resize, inverse warping, renderer
// subpixel sampling, the structure oracle) share the Catmull-Rom kernel
// (a = -0.5) and edge-clamped indexing defined here, so one oracle covers
// them all. At integer sample positions the taps reduce to an exact
// passthrough: (0, 1, 0, 0).

/// Kernel weights for the four taps at offsets {-1,0,1,2} around floor(p),
/// with fractional phase t in [0,1).
void catmull_rom_weights(double t, double w[4]);

/// d/dp of the four tap weights at phase t.
void catmull_rom_weight_derivs(double t, double dw[4]);

/// Clamped tap indices and weights for sampling a length-n axis at
/// continuous position p.
struct CubicTaps {
  std::array<int, 4> idx;
  std::array<double, 4> w;
};

CubicTaps cubic_taps(double p, int n);
CubicTaps cubic_taps_deriv(double p, int n);  // weights are d/dp

/// Edge-clamped Catmull-Rom point sample of one channel at continuous
/// (row, col). Accumulates in double.
float bicubic_sample(const Image& img, int channel, double row, double col);

/// Separable Catmull-Rom resize with the center-aligned mapping
/// src = (dst + 0.5) * in/out - 0.5. Exact passthrough when the output
/// dimensions equal the input dimensions. Throws on zero-size output.
Image bicubic_resize(const Image& img, int out_h, int out_w);

}  // namespace lfhybrid
