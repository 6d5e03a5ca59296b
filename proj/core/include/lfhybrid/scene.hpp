#pragma once

#include <vector>

#include "lfhybrid/image.hpp"
#include "lfhybrid/light_field.hpp"
#include "lfhybrid/rng.hpp"

namespace lfhybrid {

/// One fronto-parallel textured plane. An empty mask means fully opaque
/// (background layers). Disparity is in HR pixels of shift per unit angular
/// step.
struct SceneLayer {
  Image texture;
  Image mask;  // single channel, same size as texture; may be empty
  float disparity = 0.0f;
};

/// Back-to-front layer stack; layers[0] is the (opaque) background.
struct SyntheticScene {
  std::vector<SceneLayer> layers;
};

struct RenderResult {
  LightField lf;
  Image gt_disparity;    // over the central view
  Image occlusion_mask;  // 1 where the parallax constraint is unreliable
};

/// Renders the M x N light field of a layered scene at H x W. The view at
/// angular offset (du, dv) = (u-u0, v-v0) samples every layer bicubically at
/// (y + d*du, x + d*dv); compositing is back-to-front through the shifted
/// masks. Consequence: the scene point seen at central pixel (y, x) with
/// disparity d appears at (y - d*du, x - d*dv) in view (u, v), which is the
/// exact inverse of the warping operator, so warping the central view with
/// the ground-truth disparity reproduces the side views.
///
/// The occlusion mask marks central pixels whose point is covered by a
/// nearer layer in some view or whose bicubic support leaves the canvas.
RenderResult render_scene(const SyntheticScene& scene, int rows, int cols,
                          int height, int width);

/// Band-limited procedural texture: a mix of random plane waves around mid
/// gray. Frequencies are in cycles per pixel; keep the base band below ~0.1
/// for scenes whose rendered light field should satisfy the parallax
/// constraint to 1e-3 (resampling error grows quickly with frequency). The
/// optional detail band adds content above the LR Nyquist rate so that
/// downsampling becomes lossy.
struct TextureProfile {
  int waves = 6;
  double min_freq = 0.015;
  double max_freq = 0.06;
  double amplitude = 0.45;  // total, split across waves

  int detail_waves = 0;
  double detail_min_freq = 0.12;
  double detail_max_freq = 0.30;
  double detail_amplitude = 0.0;
};

/// Smooth base plus a mid-frequency band; used for training scenes where
/// bicubic upsampling must lose visible detail.
TextureProfile detailed_texture_profile();

Image make_procedural_texture(int height, int width, int channels, Rng& rng,
                              const TextureProfile& profile = {});

/// Axis-aligned rectangular opacity mask (1 inside, 0 outside).
Image make_rect_mask(int height, int width, int y0, int x0, int h, int w);

/// Random layered scene: full-canvas background plus `extra_layers`
/// rectangular foreground layers, disparities uniform in
/// [-max_disparity, max_disparity].
SyntheticScene make_random_scene(int height, int width, int channels,
                                 int extra_layers, double max_disparity,
                                 Rng& rng, const TextureProfile& profile = {});

}  // namespace lfhybrid
