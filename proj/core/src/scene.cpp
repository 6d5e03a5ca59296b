#include "lfhybrid/scene.hpp"

#include <cmath>
#include <stdexcept>

#include "lfhybrid/resample.hpp"

namespace lfhybrid {

namespace {

float sample_mask(const Image& mask, double row, double col) {
  const float m = bicubic_sample(mask, 0, row, col);
  return m < 0.0f ? 0.0f : (m > 1.0f ? 1.0f : m);
}

}  // namespace

RenderResult render_scene(const SyntheticScene& scene, int rows, int cols,
                          int height, int width) {
  if (scene.layers.empty()) throw std::invalid_argument("scene has no layers");
  if (rows % 2 == 0 || cols % 2 == 0)
    throw std::invalid_argument("angular dimensions must be odd");
  if (!scene.layers[0].mask.empty())
    throw std::invalid_argument("background layer must be opaque (empty mask)");
  const int C = scene.layers[0].texture.channels;
  for (const SceneLayer& layer : scene.layers) {
    if (layer.texture.height != height || layer.texture.width != width ||
        layer.texture.channels != C)
      throw std::invalid_argument("layer texture must match the render size");
    if (!layer.mask.empty() &&
        (layer.mask.height != height || layer.mask.width != width ||
         layer.mask.channels != 1))
      throw std::invalid_argument("layer mask must be 1 x H x W");
  }
  const int max_off = std::max(rows / 2, cols / 2);
  for (const SceneLayer& layer : scene.layers)
    if (std::abs(layer.disparity) * max_off >= std::min(height, width) / 4.0)
      throw std::invalid_argument("disparity too large for canvas");

  const int u0 = (rows + 1) / 2, v0 = (cols + 1) / 2;
  std::vector<Image> grid;
  grid.reserve(static_cast<size_t>(rows) * cols);
  for (int u = 1; u <= rows; ++u) {
    for (int v = 1; v <= cols; ++v) {
      const double du = u - u0, dv = v - v0;
      Image view(C, height, width);
      const SceneLayer& bg = scene.layers[0];
      for (int c = 0; c < C; ++c)
        for (int y = 0; y < height; ++y)
          for (int x = 0; x < width; ++x)
            view.at(c, y, x) = bicubic_sample(bg.texture, c,
                                              y + bg.disparity * du,
                                              x + bg.disparity * dv);
      for (size_t i = 1; i < scene.layers.size(); ++i) {
        const SceneLayer& layer = scene.layers[i];
        for (int y = 0; y < height; ++y) {
          for (int x = 0; x < width; ++x) {
            const double sy = y + layer.disparity * du;
            const double sx = x + layer.disparity * dv;
            const float m = layer.mask.empty() ? 1.0f : sample_mask(layer.mask, sy, sx);
            if (m == 0.0f) continue;
            for (int c = 0; c < C; ++c) {
              const float t = bicubic_sample(layer.texture, c, sy, sx);
              view.at(c, y, x) = m * t + (1.0f - m) * view.at(c, y, x);
            }
          }
        }
      }
      grid.push_back(std::move(view));
    }
  }

  // Ground-truth disparity over the central view: the front-most layer whose
  // (unshifted) mask covers the pixel.
  Image gt(1, height, width, scene.layers[0].disparity);
  std::vector<int> top(static_cast<size_t>(height) * width, 0);
  for (size_t i = 1; i < scene.layers.size(); ++i) {
    const SceneLayer& layer = scene.layers[i];
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x) {
        const float m = layer.mask.empty() ? 1.0f : layer.mask.at(0, y, x);
        if (m >= 0.5f) {
          gt.at(0, y, x) = layer.disparity;
          top[static_cast<size_t>(y) * width + x] = static_cast<int>(i);
        }
      }
  }

  // Occlusion/reliability mask. For layer j and view offset (du,dv),
  // cover[j] holds where the shifted mask of layer j has any weight and
  // full[j] where it is fully opaque. A central pixel is unreliable in a
  // view if, anywhere inside the 4x4 bicubic support around its landing
  // position, a nearer layer intrudes or its own layer stops being fully
  // opaque (either way the interpolated value mixes two layers).
  Image occ(1, height, width, 0.0f);
  const int n_layers = static_cast<int>(scene.layers.size());
  std::vector<std::vector<uint8_t>> cover(n_layers), full(n_layers);
  for (int u = 1; u <= rows; ++u) {
    for (int v = 1; v <= cols; ++v) {
      const double du = u - u0, dv = v - v0;
      for (int j = 1; j < n_layers; ++j) {
        const SceneLayer& layer = scene.layers[j];
        cover[j].assign(static_cast<size_t>(height) * width, 0);
        full[j].assign(static_cast<size_t>(height) * width, 1);
        if (layer.mask.empty()) {
          std::fill(cover[j].begin(), cover[j].end(), uint8_t(1));
          continue;
        }
        for (int y = 0; y < height; ++y)
          for (int x = 0; x < width; ++x) {
            const float m = sample_mask(layer.mask, y + layer.disparity * du,
                                        x + layer.disparity * dv);
            cover[j][static_cast<size_t>(y) * width + x] = m > 1e-3f;
            full[j][static_cast<size_t>(y) * width + x] = m > 1.0f - 1e-3f;
          }
      }
      for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
          if (occ.at(0, y, x) > 0.0f) continue;
          const int vis = top[static_cast<size_t>(y) * width + x];
          const double d = gt.at(0, y, x);
          const double py = y - d * du, px = x - d * dv;
          const int by = static_cast<int>(std::floor(py));
          const int bx = static_cast<int>(std::floor(px));
          if (by - 1 < 0 || by + 2 >= height || bx - 1 < 0 || bx + 2 >= width) {
            occ.at(0, y, x) = 1.0f;
            continue;
          }
          bool unreliable = false;
          for (int qy = by - 1; qy <= by + 2 && !unreliable; ++qy)
            for (int qx = bx - 1; qx <= bx + 2 && !unreliable; ++qx) {
              const size_t q = static_cast<size_t>(qy) * width + qx;
              if (vis > 0 && !full[vis][q]) unreliable = true;
              for (int j = vis + 1; j < n_layers && !unreliable; ++j)
                if (cover[j][q]) unreliable = true;
            }
          if (unreliable) occ.at(0, y, x) = 1.0f;
        }
      }
    }
  }
  // Soft mask values at the central view itself blend two layers.
  for (size_t i = 1; i < scene.layers.size(); ++i) {
    const SceneLayer& layer = scene.layers[i];
    if (layer.mask.empty()) continue;
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x) {
        const float m = layer.mask.at(0, y, x);
        if (m > 1e-3f && m < 1.0f - 1e-3f) occ.at(0, y, x) = 1.0f;
      }
  }

  RenderResult result;
  result.lf = make_light_field(std::move(grid), rows, cols);
  result.gt_disparity = std::move(gt);
  result.occlusion_mask = std::move(occ);
  return result;
}

TextureProfile detailed_texture_profile() {
  TextureProfile p;
  p.waves = 5;
  p.min_freq = 0.015;
  p.max_freq = 0.05;
  p.amplitude = 0.26;
  p.detail_waves = 8;
  p.detail_min_freq = 0.12;
  p.detail_max_freq = 0.30;
  p.detail_amplitude = 0.22;
  return p;
}

Image make_procedural_texture(int height, int width, int channels, Rng& rng,
                              const TextureProfile& profile) {
  Image img(channels, height, width, 0.5f);
  for (int c = 0; c < channels; ++c) {
    std::vector<double> fy, fx, ph, amp;
    auto add_band = [&](int waves, double fmin, double fmax, double total_amp) {
      if (waves <= 0 || total_amp <= 0.0) return;
      std::vector<double> a(waves);
      double total = 0.0;
      const size_t base = fy.size();
      for (int k = 0; k < waves; ++k) {
        const double f = rng.uniform(fmin, fmax);
        const double theta = rng.uniform(0.0, 2.0 * M_PI);
        fy.push_back(f * std::sin(theta));
        fx.push_back(f * std::cos(theta));
        ph.push_back(rng.uniform(0.0, 2.0 * M_PI));
        a[k] = 0.3 + rng.uniform();
        total += a[k];
      }
      for (int k = 0; k < waves; ++k) amp.push_back(a[k] * total_amp / total);
      (void)base;
    };
    add_band(profile.waves, profile.min_freq, profile.max_freq, profile.amplitude);
    add_band(profile.detail_waves, profile.detail_min_freq,
             profile.detail_max_freq, profile.detail_amplitude);
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x) {
        double v = 0.5;
        for (size_t k = 0; k < fy.size(); ++k)
          v += amp[k] * std::sin(2.0 * M_PI * (fy[k] * y + fx[k] * x) + ph[k]);
        img.at(c, y, x) = static_cast<float>(v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v));
      }
  }
  return img;
}

Image make_rect_mask(int height, int width, int y0, int x0, int h, int w) {
  Image mask(1, height, width, 0.0f);
  for (int y = std::max(0, y0); y < std::min(height, y0 + h); ++y)
    for (int x = std::max(0, x0); x < std::min(width, x0 + w); ++x)
      mask.at(0, y, x) = 1.0f;
  return mask;
}

SyntheticScene make_random_scene(int height, int width, int channels,
                                 int extra_layers, double max_disparity,
                                 Rng& rng, const TextureProfile& profile) {
  SyntheticScene scene;
  SceneLayer bg;
  bg.texture = make_procedural_texture(height, width, channels, rng, profile);
  bg.disparity = static_cast<float>(rng.uniform(-max_disparity, max_disparity));
  scene.layers.push_back(std::move(bg));
  for (int i = 0; i < extra_layers; ++i) {
    SceneLayer layer;
    layer.texture = make_procedural_texture(height, width, channels, rng, profile);
    const int h = static_cast<int>(rng.uniform(0.25, 0.5) * height);
    const int w = static_cast<int>(rng.uniform(0.25, 0.5) * width);
    const int y0 = rng.range(height / 8, height - height / 8 - h);
    const int x0 = rng.range(width / 8, width - width / 8 - w);
    layer.mask = make_rect_mask(height, width, y0, x0, h, w);
    layer.disparity = static_cast<float>(rng.uniform(-max_disparity, max_disparity));
    scene.layers.push_back(std::move(layer));
  }
  return scene;
}

}  // namespace lfhybrid
