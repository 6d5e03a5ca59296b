#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace lfhybrid {

/// Planar floating-point image: channel-major, row-major within a channel.
/// Pixel values are nominally in [0,1] but are not clamped by the container.
struct Image {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<float> data;

  Image() = default;
  Image(int c, int h, int w, float fill = 0.0f)
      : channels(c), height(h), width(w),
        data(static_cast<size_t>(c) * h * w, fill) {
    if (c < 1 || h < 1 || w < 1)
      throw std::invalid_argument("image dimensions must be positive");
  }

  size_t size() const { return data.size(); }
  bool empty() const { return data.empty(); }

  float& at(int c, int y, int x) {
    return data[(static_cast<size_t>(c) * height + y) * width + x];
  }
  float at(int c, int y, int x) const {
    return data[(static_cast<size_t>(c) * height + y) * width + x];
  }

  float* channel(int c) {
    return data.data() + static_cast<size_t>(c) * height * width;
  }
  const float* channel(int c) const {
    return data.data() + static_cast<size_t>(c) * height * width;
  }

  float* row(int c, int y) { return channel(c) + static_cast<size_t>(y) * width; }
  const float* row(int c, int y) const {
    return channel(c) + static_cast<size_t>(y) * width;
  }

  bool same_shape(const Image& o) const {
    return channels == o.channels && height == o.height && width == o.width;
  }
};

inline bool all_finite(const Image& img) {
  for (float v : img.data)
    if (!std::isfinite(v)) return false;
  return true;
}

inline void clamp01(Image& img) {
  for (float& v : img.data) v = v < 0.0f ? 0.0f : (v > 1.0f ? 1.0f : v);
}

/// Max absolute difference over all pixels; images must have equal shape.
inline float max_abs_diff(const Image& a, const Image& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("image shape mismatch");
  float m = 0.0f;
  for (size_t i = 0; i < a.data.size(); ++i)
    m = std::max(m, std::fabs(a.data[i] - b.data[i]));
  return m;
}

}  // namespace lfhybrid
