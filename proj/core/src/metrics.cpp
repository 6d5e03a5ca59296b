#include "lfhybrid/metrics.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "lfhybrid/color.hpp"
#include "lfhybrid/epi.hpp"

namespace lfhybrid {

namespace {

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;
constexpr double kK1 = 0.01;
constexpr double kK2 = 0.03;

std::vector<double> gaussian_window(int n, double sigma) {
  std::vector<double> w(n);
  const double c = (n - 1) / 2.0;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    w[i] = std::exp(-(i - c) * (i - c) / (2.0 * sigma * sigma));
    sum += w[i];
  }
  for (double& v : w) v /= sum;
  return w;
}

std::vector<double> uniform_window(int n) {
  return std::vector<double>(n, 1.0 / n);
}

}  // namespace

float psnr(const Image& a, const Image& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("psnr shape mismatch");
  double mse = 0.0;
  for (size_t i = 0; i < a.data.size(); ++i) {
    const double d = static_cast<double>(a.data[i]) - b.data[i];
    mse += d * d;
  }
  mse /= static_cast<double>(a.data.size());
  if (mse <= 0.0) return 100.0f;
  const double db = 10.0 * std::log10(1.0 / mse);
  return static_cast<float>(db > 100.0 ? 100.0 : db);
}

float ssim_windowed(const Image& a, const Image& b,
                    const std::vector<double>& win_y,
                    const std::vector<double>& win_x) {
  if (!a.same_shape(b)) throw std::invalid_argument("ssim shape mismatch");
  if (a.channels != 1) throw std::invalid_argument("ssim expects single-channel images");
  const int wy = static_cast<int>(win_y.size());
  const int wx = static_cast<int>(win_x.size());
  if (a.height < wy || a.width < wx)
    throw std::invalid_argument("image smaller than the ssim window");

  std::vector<double> ny(win_y), nx(win_x);
  double sy = 0, sx = 0;
  for (double v : ny) sy += v;
  for (double v : nx) sx += v;
  for (double& v : ny) v /= sy;
  for (double& v : nx) v /= sx;

  const double c1 = kK1 * kK1, c2 = kK2 * kK2;
  double total = 0.0;
  int count = 0;
  for (int y0 = 0; y0 + wy <= a.height; ++y0) {
    for (int x0 = 0; x0 + wx <= a.width; ++x0) {
      double ma = 0, mb = 0;
      for (int i = 0; i < wy; ++i)
        for (int j = 0; j < wx; ++j) {
          const double w = ny[i] * nx[j];
          ma += w * a.at(0, y0 + i, x0 + j);
          mb += w * b.at(0, y0 + i, x0 + j);
        }
      double va = 0, vb = 0, cov = 0;
      for (int i = 0; i < wy; ++i)
        for (int j = 0; j < wx; ++j) {
          const double w = ny[i] * nx[j];
          const double da = a.at(0, y0 + i, x0 + j) - ma;
          const double db = b.at(0, y0 + i, x0 + j) - mb;
          va += w * da * da;
          vb += w * db * db;
          cov += w * da * db;
        }
      total += ((2 * ma * mb + c1) * (2 * cov + c2)) /
               ((ma * ma + mb * mb + c1) * (va + vb + c2));
      ++count;
    }
  }
  return static_cast<float>(total / count);
}

float ssim(const Image& a, const Image& b) {
  const std::vector<double> w = gaussian_window(kWindow, kSigma);
  return ssim_windowed(a, b, w, w);
}

float epi_ssim(const LightField& pred, const LightField& gt) {
  if (pred.rows != gt.rows || pred.cols != gt.cols ||
      pred.height() != gt.height() || pred.width() != gt.width() ||
      pred.channels() != gt.channels())
    throw std::invalid_argument("light field dimensions mismatch");

  const std::vector<double> gauss = gaussian_window(kWindow, kSigma);
  double total = 0.0;
  int count = 0;

  // Horizontal EPIs: N x W; the angular axis gets a uniform window when
  // shorter than the Gaussian one.
  {
    const std::vector<double> wy =
        pred.cols < kWindow ? uniform_window(pred.cols) : gauss;
    const std::vector<double> wx =
        pred.width() < kWindow ? uniform_window(pred.width()) : gauss;
    for (int u = 1; u <= pred.rows; ++u)
      for (int y = 0; y < pred.height(); ++y) {
        const Image ep = extract_luma(extract_epi(pred, EpiOrientation::horizontal, u, y));
        const Image eg = extract_luma(extract_epi(gt, EpiOrientation::horizontal, u, y));
        total += ssim_windowed(ep, eg, wy, wx);
        ++count;
      }
  }
  {
    const std::vector<double> wy =
        pred.rows < kWindow ? uniform_window(pred.rows) : gauss;
    const std::vector<double> wx =
        pred.height() < kWindow ? uniform_window(pred.height()) : gauss;
    for (int v = 1; v <= pred.cols; ++v)
      for (int x = 0; x < pred.width(); ++x) {
        const Image ep = extract_luma(extract_epi(pred, EpiOrientation::vertical, v, x));
        const Image eg = extract_luma(extract_epi(gt, EpiOrientation::vertical, v, x));
        total += ssim_windowed(ep, eg, wy, wx);
        ++count;
      }
  }
  return static_cast<float>(total / count);
}

MetricsReport evaluate_light_field(const LightField& pred, const LightField& gt) {
  if (pred.rows != gt.rows || pred.cols != gt.cols)
    throw std::invalid_argument("light field grid mismatch");
  MetricsReport report;
  const AngularCoord u0 = pred.central();
  double psnr_side = 0, ssim_side = 0, psnr_all = 0, ssim_all = 0;
  int n_side = 0;
  for (int u = 1; u <= pred.rows; ++u) {
    for (int v = 1; v <= pred.cols; ++v) {
      const Image a = extract_luma(pred.view(u, v));
      const Image b = extract_luma(gt.view(u, v));
      ViewMetrics vm;
      vm.coord = {u, v};
      vm.psnr = psnr(a, b);
      vm.ssim = ssim(a, b);
      report.per_view.push_back(vm);
      psnr_all += vm.psnr;
      ssim_all += vm.ssim;
      if (!(u == u0.u && v == u0.v)) {
        psnr_side += vm.psnr;
        ssim_side += vm.ssim;
        ++n_side;
      }
    }
  }
  const int n_all = pred.rows * pred.cols;
  report.psnr_all_avg = static_cast<float>(psnr_all / n_all);
  report.ssim_all_avg = static_cast<float>(ssim_all / n_all);
  report.psnr_side_avg = static_cast<float>(n_side ? psnr_side / n_side : 0.0);
  report.ssim_side_avg = static_cast<float>(n_side ? ssim_side / n_side : 0.0);
  report.epi_ssim = epi_ssim(pred, gt);
  return report;
}

void save_metrics_csv(const std::string& path, const MetricsReport& report) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write report: " + path);
  out << "u,v,psnr,ssim\n";
  out.precision(8);
  for (const ViewMetrics& vm : report.per_view)
    out << vm.coord.u << ',' << vm.coord.v << ',' << vm.psnr << ',' << vm.ssim << "\n";
  out << "side_avg,," << report.psnr_side_avg << ',' << report.ssim_side_avg << "\n";
  out << "all_avg,," << report.psnr_all_avg << ',' << report.ssim_all_avg << "\n";
  out << "epi_ssim,,," << report.epi_ssim << "\n";
  out << "reconstruction_seconds,,," << report.reconstruction_seconds << "\n";
}

}  // namespace lfhybrid
