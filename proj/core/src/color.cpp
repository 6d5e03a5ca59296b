#include "lfhybrid/color.hpp"

#include <stdexcept>

namespace lfhybrid {

namespace {
constexpr float kWr = 0.299f;
constexpr float kWg = 0.587f;
constexpr float kWb = 0.114f;
// Chroma scale factors for full-range BT.601: Cb = (B-Y)/1.772 + 0.5,
// Cr = (R-Y)/1.402 + 0.5.
constexpr float kCbDiv = 1.772f;
constexpr float kCrDiv = 1.402f;
}  // namespace

Image rgb_to_ycbcr(const Image& rgb) {
  if (rgb.channels != 3) throw std::invalid_argument("expected 3-channel input");
  Image out(3, rgb.height, rgb.width);
  const size_t n = static_cast<size_t>(rgb.height) * rgb.width;
  const float* r = rgb.channel(0);
  const float* g = rgb.channel(1);
  const float* b = rgb.channel(2);
  float* y = out.channel(0);
  float* cb = out.channel(1);
  float* cr = out.channel(2);
  for (size_t i = 0; i < n; ++i) {
    const float yy = kWr * r[i] + kWg * g[i] + kWb * b[i];
    y[i] = yy;
    cb[i] = (b[i] - yy) / kCbDiv + 0.5f;
    cr[i] = (r[i] - yy) / kCrDiv + 0.5f;
  }
  return out;
}

Image ycbcr_to_rgb(const Image& ycbcr) {
  if (ycbcr.channels != 3) throw std::invalid_argument("expected 3-channel input");
  Image out(3, ycbcr.height, ycbcr.width);
  const size_t n = static_cast<size_t>(ycbcr.height) * ycbcr.width;
  const float* y = ycbcr.channel(0);
  const float* cb = ycbcr.channel(1);
  const float* cr = ycbcr.channel(2);
  float* r = out.channel(0);
  float* g = out.channel(1);
  float* b = out.channel(2);
  for (size_t i = 0; i < n; ++i) {
    const float rr = y[i] + kCrDiv * (cr[i] - 0.5f);
    const float bb = y[i] + kCbDiv * (cb[i] - 0.5f);
    r[i] = rr;
    b[i] = bb;
    g[i] = (y[i] - kWr * rr - kWb * bb) / kWg;
  }
  return out;
}

Image extract_luma(const Image& img) {
  if (img.channels == 1) return img;
  if (img.channels != 3)
    throw std::invalid_argument("expected 1- or 3-channel input");
  Image out(1, img.height, img.width);
  const size_t n = static_cast<size_t>(img.height) * img.width;
  const float* r = img.channel(0);
  const float* g = img.channel(1);
  const float* b = img.channel(2);
  float* y = out.channel(0);
  for (size_t i = 0; i < n; ++i) y[i] = kWr * r[i] + kWg * g[i] + kWb * b[i];
  return out;
}

}  // namespace lfhybrid
