#include "lfhybrid/resample.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace lfhybrid {

void catmull_rom_weights(double t, double w[4]) {
  if (t == 0.0) {  // exact passthrough at integer phases
    w[0] = 0.0;
    w[1] = 1.0;
    w[2] = 0.0;
    w[3] = 0.0;
    return;
  }
  const double t2 = t * t, t3 = t2 * t;
  w[0] = -0.5 * t3 + t2 - 0.5 * t;
  w[1] = 1.5 * t3 - 2.5 * t2 + 1.0;
  w[2] = -1.5 * t3 + 2.0 * t2 + 0.5 * t;
  w[3] = 0.5 * t3 - 0.5 * t2;
}

void catmull_rom_weight_derivs(double t, double dw[4]) {
  const double t2 = t * t;
  dw[0] = -1.5 * t2 + 2.0 * t - 0.5;
  dw[1] = 4.5 * t2 - 5.0 * t;
  dw[2] = -4.5 * t2 + 4.0 * t + 0.5;
  dw[3] = 1.5 * t2 - t;
}

namespace {
inline int clamp_index(int i, int n) { return i < 0 ? 0 : (i >= n ? n - 1 : i); }
}  // namespace

CubicTaps cubic_taps(double p, int n) {
  const double base = std::floor(p);
  const double t = p - base;
  const int b = static_cast<int>(base);
  CubicTaps taps;
  for (int k = 0; k < 4; ++k) taps.idx[k] = clamp_index(b - 1 + k, n);
  catmull_rom_weights(t, taps.w.data());
  return taps;
}

CubicTaps cubic_taps_deriv(double p, int n) {
  const double base = std::floor(p);
  const double t = p - base;
  const int b = static_cast<int>(base);
  CubicTaps taps;
  for (int k = 0; k < 4; ++k) taps.idx[k] = clamp_index(b - 1 + k, n);
  catmull_rom_weight_derivs(t, taps.w.data());
  return taps;
}

float bicubic_sample(const Image& img, int channel, double row, double col) {
  const CubicTaps ty = cubic_taps(row, img.height);
  const CubicTaps tx = cubic_taps(col, img.width);
  const float* ch = img.channel(channel);
  double acc = 0.0;
  for (int ky = 0; ky < 4; ++ky) {
    const float* r = ch + static_cast<size_t>(ty.idx[ky]) * img.width;
    double rowacc = 0.0;
    for (int kx = 0; kx < 4; ++kx) rowacc += tx.w[kx] * r[tx.idx[kx]];
    acc += ty.w[ky] * rowacc;
  }
  return static_cast<float>(acc);
}

Image bicubic_resize(const Image& img, int out_h, int out_w) {
  if (out_h < 1 || out_w < 1) throw std::invalid_argument("zero-size output");
  if (img.empty()) throw std::invalid_argument("empty input image");

  std::vector<CubicTaps> col_taps(out_w), row_taps(out_h);
  const double sx = static_cast<double>(img.width) / out_w;
  const double sy = static_cast<double>(img.height) / out_h;
  for (int x = 0; x < out_w; ++x)
    col_taps[x] = cubic_taps((x + 0.5) * sx - 0.5, img.width);
  for (int y = 0; y < out_h; ++y)
    row_taps[y] = cubic_taps((y + 0.5) * sy - 0.5, img.height);

  Image out(img.channels, out_h, out_w);
  // Horizontal pass into a per-channel temp, then vertical pass.
  std::vector<double> tmp(static_cast<size_t>(img.height) * out_w);
  for (int c = 0; c < img.channels; ++c) {
    for (int y = 0; y < img.height; ++y) {
      const float* src = img.row(c, y);
      double* dst = tmp.data() + static_cast<size_t>(y) * out_w;
      for (int x = 0; x < out_w; ++x) {
        const CubicTaps& tx = col_taps[x];
        dst[x] = tx.w[0] * src[tx.idx[0]] + tx.w[1] * src[tx.idx[1]] +
                 tx.w[2] * src[tx.idx[2]] + tx.w[3] * src[tx.idx[3]];
      }
    }
    for (int y = 0; y < out_h; ++y) {
      const CubicTaps& ty = row_taps[y];
      const double* r0 = tmp.data() + static_cast<size_t>(ty.idx[0]) * out_w;
      const double* r1 = tmp.data() + static_cast<size_t>(ty.idx[1]) * out_w;
      const double* r2 = tmp.data() + static_cast<size_t>(ty.idx[2]) * out_w;
      const double* r3 = tmp.data() + static_cast<size_t>(ty.idx[3]) * out_w;
      float* dst = out.row(c, y);
      for (int x = 0; x < out_w; ++x)
        dst[x] = static_cast<float>(ty.w[0] * r0[x] + ty.w[1] * r1[x] +
                                    ty.w[2] * r2[x] + ty.w[3] * r3[x]);
    }
  }
  return out;
}

}  // namespace lfhybrid
