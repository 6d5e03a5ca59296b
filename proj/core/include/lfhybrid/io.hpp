#pragma once

#include <string>

#include "lfhybrid/light_field.hpp"

namespace lfhybrid {

// On-disk layout for a light field: a directory of PNG files named
// view_{u}_{v}.png (1-based angular indices) plus a manifest.txt with
// line-based key=value entries: M, N, H, W, C, scale. H/W are the side-view
// dimensions; in a hybrid directory the central view is scale*H x scale*W.
// Disparity maps are raw 32-bit little-endian float rasters, row-major,
// named disp_{u}_{v}.f32.

/// PNG I/O. Images are written as 16-bit grayscale (1 channel) or 16-bit RGB
/// (3 channels); reads accept 8- or 16-bit gray/RGB and normalize to [0,1].
Image load_png(const std::string& path);
void save_png(const std::string& path, const Image& img);

/// Raw float32 raster (single channel).
Image load_f32(const std::string& path, int height, int width);
void save_f32(const std::string& path, const Image& img);

void save_light_field(const std::string& dir, const LightField& lf, int scale = 1);
LightField load_light_field(const std::string& dir);

void save_hybrid_input(const std::string& dir, const HybridInput& hybrid);
HybridInput load_hybrid_input(const std::string& dir);

void save_disparity_field(const std::string& dir, const DisparityField& field);

}  // namespace lfhybrid
