#include "lfhybrid/augment.hpp"

#include <cmath>
#include <stdexcept>

#include "lfhybrid/color.hpp"
#include "lfhybrid/rng.hpp"

namespace lfhybrid {

Image flip_image_rows(const Image& img) {
  Image out(img.channels, img.height, img.width);
  for (int c = 0; c < img.channels; ++c)
    for (int y = 0; y < img.height; ++y)
      for (int x = 0; x < img.width; ++x)
        out.at(c, y, x) = img.at(c, img.height - 1 - y, x);
  return out;
}

Image flip_image_cols(const Image& img) {
  Image out(img.channels, img.height, img.width);
  for (int c = 0; c < img.channels; ++c)
    for (int y = 0; y < img.height; ++y)
      for (int x = 0; x < img.width; ++x)
        out.at(c, y, x) = img.at(c, y, img.width - 1 - x);
  return out;
}

Image transpose_image(const Image& img) {
  Image out(img.channels, img.width, img.height);
  for (int c = 0; c < img.channels; ++c)
    for (int y = 0; y < img.height; ++y)
      for (int x = 0; x < img.width; ++x)
        out.at(c, x, y) = img.at(c, y, x);
  return out;
}

LightField geometric_augment(const LightField& lf, GeometricOp op) {
  const int M = lf.rows, N = lf.cols;
  std::vector<Image> grid(static_cast<size_t>(M) * N);
  switch (op) {
    case GeometricOp::flip_h:
      for (int u = 1; u <= M; ++u)
        for (int v = 1; v <= N; ++v)
          grid[static_cast<size_t>(u - 1) * N + (v - 1)] =
              flip_image_rows(lf.view(M + 1 - u, v));
      return make_light_field(std::move(grid), M, N);
    case GeometricOp::flip_v:
      for (int u = 1; u <= M; ++u)
        for (int v = 1; v <= N; ++v)
          grid[static_cast<size_t>(u - 1) * N + (v - 1)] =
              flip_image_cols(lf.view(u, N + 1 - v));
      return make_light_field(std::move(grid), M, N);
    case GeometricOp::transpose: {
      std::vector<Image> tgrid(static_cast<size_t>(N) * M);
      for (int u = 1; u <= N; ++u)
        for (int v = 1; v <= M; ++v)
          tgrid[static_cast<size_t>(u - 1) * M + (v - 1)] =
              transpose_image(lf.view(v, u));
      return make_light_field(std::move(tgrid), N, M);
    }
  }
  throw std::invalid_argument("unsupported geometric op");
}

AugmentedScene geometric_augment(const LightField& lf, const Image& gt_disparity,
                                 const Image* occlusion_mask, GeometricOp op) {
  AugmentedScene out;
  out.lf = geometric_augment(lf, op);
  switch (op) {
    case GeometricOp::flip_h:
      out.gt_disparity = flip_image_rows(gt_disparity);
      if (occlusion_mask) out.occlusion_mask = flip_image_rows(*occlusion_mask);
      break;
    case GeometricOp::flip_v:
      out.gt_disparity = flip_image_cols(gt_disparity);
      if (occlusion_mask) out.occlusion_mask = flip_image_cols(*occlusion_mask);
      break;
    case GeometricOp::transpose:
      out.gt_disparity = transpose_image(gt_disparity);
      if (occlusion_mask) out.occlusion_mask = transpose_image(*occlusion_mask);
      break;
  }
  return out;
}

namespace {

void apply_brightness(Image& img, float b) {
  for (float& v : img.data) v = v + b;
  clamp01(img);
}

void apply_contrast(Image& img, float c) {
  const float slope = 1.0f + c;
  for (float& v : img.data) v = (v - 0.5f) * slope + 0.5f;
  clamp01(img);
}

void apply_saturation(Image& img, float s) {
  if (img.channels != 3) return;
  const float k = 1.0f + s;
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      const float luma = 0.299f * img.at(0, y, x) + 0.587f * img.at(1, y, x) +
                         0.114f * img.at(2, y, x);
      for (int c = 0; c < 3; ++c)
        img.at(c, y, x) = luma + (img.at(c, y, x) - luma) * k;
    }
  clamp01(img);
}

void apply_hue(Image& img, float h) {
  if (img.channels != 3) return;
  const float angle = static_cast<float>(2.0 * M_PI) * h;
  const float ca = std::cos(angle), sa = std::sin(angle);
  Image ycc = rgb_to_ycbcr(img);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      const float cb = ycc.at(1, y, x) - 0.5f;
      const float cr = ycc.at(2, y, x) - 0.5f;
      ycc.at(1, y, x) = 0.5f + ca * cb - sa * cr;
      ycc.at(2, y, x) = 0.5f + sa * cb + ca * cr;
    }
  img = ycbcr_to_rgb(ycc);
  clamp01(img);
}

}  // namespace

HybridInput color_augment(const HybridInput& hybrid, const ColorJitter& jitter,
                          uint64_t seed) {
  HybridInput out = hybrid;
  Rng rng(seed);
  for (Image& view : out.side_views) {
    const float b = static_cast<float>(rng.uniform(-jitter.brightness, jitter.brightness));
    const float c = static_cast<float>(rng.uniform(-jitter.contrast, jitter.contrast));
    const float s = static_cast<float>(rng.uniform(-jitter.saturation, jitter.saturation));
    const float h = static_cast<float>(rng.uniform(-jitter.hue, jitter.hue));
    if (b != 0.0f) apply_brightness(view, b);
    if (c != 0.0f) apply_contrast(view, c);
    if (s != 0.0f) apply_saturation(view, s);
    if (h != 0.0f) apply_hue(view, h);
  }
  return out;
}

}  // namespace lfhybrid
