#pragma once

#include "lfhybrid/image.hpp"

namespace lfhybrid {

// Full-range BT.601 conversion. Y = 0.299 R + 0.587 G + 0.114 B, chroma
// centered at 0.5. Round-trip error stays below 1e-4 per channel.

Image rgb_to_ycbcr(const Image& rgb);
Image ycbcr_to_rgb(const Image& ycbcr);

/// Luma channel only, as a single-channel image. Accepts 1-channel input
/// (returned unchanged) or 3-channel RGB.
Image extract_luma(const Image& img);

}  // namespace lfhybrid
