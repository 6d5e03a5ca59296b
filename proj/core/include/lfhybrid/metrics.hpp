#pragma once

#include <string>
#include <vector>

#include "lfhybrid/light_field.hpp"

namespace lfhybrid {

/// 10*log10(1/MSE) for values in [0,1], capped at 100 dB (identical images
/// hit the cap). Throws on shape mismatch.
float psnr(const Image& a, const Image& b);

/// Standard single-channel SSIM: 11x11 Gaussian window (sigma 1.5),
/// K1=0.01, K2=0.03, dynamic range 1, mean over valid window positions.
/// Throws if the image is smaller than the window.
float ssim(const Image& a, const Image& b);

/// SSIM with explicit separable window weights (each normalized internally).
float ssim_windowed(const Image& a, const Image& b,
                    const std::vector<double>& win_y,
                    const std::vector<double>& win_x);

/// Mean SSIM over every horizontal EPI (each angular row x image row) and
/// every vertical EPI. Along an angular axis shorter than 11 the window is
/// uniform of that length; the spatial axis keeps the Gaussian window.
float epi_ssim(const LightField& pred, const LightField& gt);

struct ViewMetrics {
  AngularCoord coord;
  float psnr = 0;
  float ssim = 0;
};

struct MetricsReport {
  std::vector<ViewMetrics> per_view;      // all M*N views
  float psnr_side_avg = 0, ssim_side_avg = 0;
  float psnr_all_avg = 0, ssim_all_avg = 0;
  float epi_ssim = 0;
  double reconstruction_seconds = 0;
};

/// Per-view PSNR/SSIM on the luma channel plus side-view-only and all-view
/// averages and the EPI-SSIM.
MetricsReport evaluate_light_field(const LightField& pred, const LightField& gt);

void save_metrics_csv(const std::string& path, const MetricsReport& report);

}  // namespace lfhybrid
