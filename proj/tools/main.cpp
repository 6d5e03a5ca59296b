// lfhybrid: render synthetic light-field scenes, train the two-branch
// reconstruction model on simulated hybrid inputs, and evaluate the results.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "lfhybrid/augment.hpp"
#include "lfhybrid/checkpoint.hpp"
#include "lfhybrid/color.hpp"
#include "lfhybrid/epi.hpp"
#include "lfhybrid/io.hpp"
#include "lfhybrid/kv_file.hpp"
#include "lfhybrid/metrics.hpp"
#include "lfhybrid/reconstruct.hpp"
#include "lfhybrid/resample.hpp"
#include "lfhybrid/scene.hpp"
#include "lfhybrid/simulate.hpp"
#include "lfhybrid/structure.hpp"
#include "lfhybrid/trainer.hpp"

namespace fs = std::filesystem;
using namespace lfhybrid;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::pair<int, int> parse_pair(const std::string& s, const char* what) {
  const size_t x = s.find('x');
  if (x == std::string::npos)
    throw UsageError(std::string(what) + " must look like AxB, got: " + s);
  try {
    return {std::stoi(s.substr(0, x)), std::stoi(s.substr(x + 1))};
  } catch (const std::exception&) {
    throw UsageError(std::string(what) + " must look like AxB, got: " + s);
  }
}

Image load_texture(const std::string& spec, int h, int w, int channels) {
  const std::string kProcedural = "procedural:";
  if (spec.rfind(kProcedural, 0) == 0) {
    Rng rng(std::stoull(spec.substr(kProcedural.size())));
    return make_procedural_texture(h, w, channels, rng);
  }
  Image img = load_png(spec);
  if (img.channels != channels) img = channels == 1 ? extract_luma(img) : img;
  if (img.height != h || img.width != w) img = bicubic_resize(img, h, w);
  return img;
}

SyntheticScene load_scene_file(const std::string& path, int h, int w) {
  const KvFile kv = KvFile::load(path);
  const int channels = static_cast<int>(kv.get_int_or("channels", 1));
  SyntheticScene scene;
  for (const auto& [key, value] : kv.entries()) {
    if (key == "layer.texture") {
      SceneLayer layer;
      layer.texture = load_texture(value, h, w, channels);
      scene.layers.push_back(std::move(layer));
    } else if (key == "layer.disparity") {
      if (scene.layers.empty())
        throw std::runtime_error("layer.disparity before any layer.texture");
      scene.layers.back().disparity = std::stof(value);
    } else if (key == "layer.mask") {
      if (scene.layers.empty())
        throw std::runtime_error("layer.mask before any layer.texture");
      Image mask = extract_luma(load_png(value));
      if (mask.height != h || mask.width != w) {
        mask = bicubic_resize(mask, h, w);
        clamp01(mask);
      }
      scene.layers.back().mask = std::move(mask);
    }
  }
  if (scene.layers.empty()) throw std::runtime_error("scene file declares no layers");
  return scene;
}

int run_simulate(const std::string& scene_path, const std::string& views,
                 const std::string& size, int scale, const std::string& out) {
  const auto [rows, cols] = parse_pair(views, "--views");
  const auto [height, width] = parse_pair(size, "--size");
  SyntheticScene scene = load_scene_file(scene_path, height, width);
  RenderResult r = render_scene(scene, rows, cols, height, width);
  HybridInput hybrid = simulate_hybrid(r.lf, scale);

  save_light_field((fs::path(out) / "gt").string(), r.lf);
  save_hybrid_input((fs::path(out) / "hybrid").string(), hybrid);
  const AngularCoord u0 = r.lf.central();
  save_f32((fs::path(out) / "gt" /
            ("disp_" + std::to_string(u0.u) + "_" + std::to_string(u0.v) + ".f32"))
               .string(),
           r.gt_disparity);
  save_f32((fs::path(out) / "gt" / "occlusion.f32").string(), r.occlusion_mask);

  const float residual = structure_residual(r.lf, r.gt_disparity, r.occlusion_mask);
  std::cout << "rendered " << rows << "x" << cols << " light field at " << height
            << "x" << width << " (scale " << scale << ")\n"
            << "parallax residual off occlusions: " << residual << "\n"
            << "wrote " << (fs::path(out) / "gt").string() << " and "
            << (fs::path(out) / "hybrid").string() << "\n";
  return 0;
}

LightField load_luma_light_field(const std::string& dir) {
  LightField lf = load_light_field(dir);
  for (Image& view : lf.views) view = extract_luma(view);
  return lf;
}

ModelConfig model_config_from(const KvFile& kv, int rows, int cols, int scale) {
  ModelConfig mc;
  mc.rows = rows;
  mc.cols = cols;
  mc.scale = scale;
  mc.sr.base_width = static_cast<int>(kv.get_int_or("sr.base_width", 32));
  mc.sr.dense_layers = static_cast<int>(kv.get_int_or("sr.dense_layers", 4));
  mc.sr.growth = static_cast<int>(kv.get_int_or("sr.growth", 16));
  mc.sr.hr_layers = static_cast<int>(kv.get_int_or("sr.hr_layers", 4));
  mc.sr.view_feat = static_cast<int>(kv.get_int_or("sr.view_feat", 8));
  mc.sr.scale = scale;
  mc.warp.base_width = static_cast<int>(kv.get_int_or("warp.base_width", 32));
  mc.warp.unet_levels = static_cast<int>(kv.get_int_or("warp.unet_levels", 3));
  mc.warp.dense_layers = static_cast<int>(kv.get_int_or("warp.dense_layers", 4));
  mc.warp.growth = static_cast<int>(kv.get_int_or("warp.growth", 16));
  mc.warp.refine_feat = static_cast<int>(kv.get_int_or("warp.refine_feat", 16));
  mc.warp.scale = scale;
  return mc;
}

int run_train(const std::string& config_path, const std::string& data_dir,
              const std::string& out_path) {
  const KvFile kv = KvFile::load(config_path);

  std::vector<std::string> lf_dirs;
  if (fs::exists(fs::path(data_dir) / "manifest.txt")) {
    lf_dirs.push_back(data_dir);
  } else {
    for (const auto& entry : fs::directory_iterator(data_dir))
      if (entry.is_directory() && fs::exists(entry.path() / "manifest.txt"))
        lf_dirs.push_back(entry.path().string());
  }
  std::sort(lf_dirs.begin(), lf_dirs.end());
  if (lf_dirs.empty())
    throw std::runtime_error("no light-field directories under " + data_dir);

  std::vector<LightField> dataset;
  for (const std::string& dir : lf_dirs) dataset.push_back(load_luma_light_field(dir));

  TrainConfig cfg;
  cfg.lr0 = kv.get_double_or("lr0", 1e-4);
  cfg.decay = kv.get_double_or("decay", 0.5);
  cfg.decay_period = static_cast<int>(kv.get_int_or("decay_period", 250));
  cfg.patch = static_cast<int>(kv.get_int_or("patch", 128));
  cfg.epochs = static_cast<int>(kv.get_int_or("epochs", 250));
  cfg.seed = static_cast<uint64_t>(kv.get_int_or("seed", 0));
  cfg.weights.lambda = kv.get_double_or("loss.lambda", 150.0);
  cfg.weights.gamma = kv.get_double_or("loss.gamma", 0.1);
  cfg.augment_geometric = kv.get_int_or("augment.geometric", 1) != 0;
  cfg.augment_color = kv.get_int_or("augment.color", 0) != 0;
  cfg.jitter.brightness = kv.get_double_or("jitter.brightness", 0.2);
  cfg.jitter.contrast = kv.get_double_or("jitter.contrast", 0.2);
  cfg.jitter.saturation = kv.get_double_or("jitter.saturation", 0.2);
  cfg.jitter.hue = kv.get_double_or("jitter.hue", 0.05);

  const int scale = static_cast<int>(kv.get_int_or("alpha", 2));
  ModelConfig mc = model_config_from(kv, dataset[0].rows, dataset[0].cols, scale);
  Model<float> model = Model<float>::init(mc, cfg.seed);
  AdamOptimizer<float> opt = make_optimizer(model, cfg.adam);

  std::cout << "training on " << dataset.size() << " scenes, "
            << model.num_params() << " parameters, " << cfg.epochs
            << " epochs\n";
  TrainLog log = fit(model, dataset, cfg, &opt);
  if (!log.rows.empty())
    std::cout << "total loss: first " << log.rows.front().total << ", last "
              << log.rows.back().total << "\n";

  save_checkpoint(out_path, model, &opt);
  const std::string log_path = kv.get_or("log", out_path + ".log.csv");
  log.save_csv(log_path);
  std::cout << "wrote " << out_path << " and " << log_path << "\n";
  return 0;
}

int run_reconstruct(const std::string& ckpt, const std::string& input,
                    const std::string& out, bool dump_intermediates,
                    const std::string& gt_dir) {
  LoadedCheckpoint loaded = load_checkpoint(ckpt);
  HybridInput hybrid = load_hybrid_input(input);
  if (hybrid.central_hr.channels != 1) {
    hybrid.central_hr = extract_luma(hybrid.central_hr);
    for (Image& view : hybrid.side_views) view = extract_luma(view);
  }

  ReconstructResult result = reconstruct(loaded.model, hybrid);
  save_light_field(out, result.output);
  result.d_h.rows = hybrid.rows;
  result.d_h.cols = hybrid.cols;
  save_disparity_field(out, result.d_h);

  if (dump_intermediates) {
    const auto coords = side_coords(hybrid.rows, hybrid.cols);
    fs::create_directories(fs::path(out) / "sr");
    fs::create_directories(fs::path(out) / "warp");
    fs::create_directories(fs::path(out) / "attention");
    for (size_t i = 0; i < coords.size(); ++i) {
      const std::string name = "view_" + std::to_string(coords[i].u) + "_" +
                               std::to_string(coords[i].v) + ".png";
      Image sr = result.sr_views[i];
      Image warp = result.warp_views[i];
      clamp01(sr);
      clamp01(warp);
      save_png((fs::path(out) / "sr" / name).string(), sr);
      save_png((fs::path(out) / "warp" / name).string(), warp);
      save_png((fs::path(out) / "attention" / name).string(), result.attn_sr[i]);
    }
  }

  std::cout << "reconstructed " << hybrid.rows << "x" << hybrid.cols
            << " light field in " << result.seconds << " s\n";
  if (!gt_dir.empty()) {
    LightField gt = load_luma_light_field(gt_dir);
    MetricsReport rep = evaluate_light_field(result.output, gt);
    rep.reconstruction_seconds = result.seconds;
    std::cout << "side-view PSNR " << rep.psnr_side_avg << " dB, SSIM "
              << rep.ssim_side_avg << ", EPI-SSIM " << rep.epi_ssim << "\n";
  }
  std::cout << "wrote " << out << "\n";
  return 0;
}

int run_eval(const std::string& pred, const std::string& gt,
             const std::string& report) {
  LightField pred_lf = load_luma_light_field(pred);
  LightField gt_lf = load_luma_light_field(gt);
  MetricsReport rep = evaluate_light_field(pred_lf, gt_lf);
  save_metrics_csv(report, rep);
  std::cout << "side views: PSNR " << rep.psnr_side_avg << " dB, SSIM "
            << rep.ssim_side_avg << "\n"
            << "all views:  PSNR " << rep.psnr_all_avg << " dB, SSIM "
            << rep.ssim_all_avg << "\n"
            << "EPI-SSIM: " << rep.epi_ssim << "\n"
            << "wrote " << report << "\n";
  return 0;
}

int run_epi(const std::string& lf_dir, int row, int urow, const std::string& out) {
  LightField lf = load_light_field(lf_dir);
  Image epi = extract_epi(lf, EpiOrientation::horizontal, urow, row);
  clamp01(epi);
  save_png(out, epi);
  std::cout << "wrote " << out << " (" << epi.height << "x" << epi.width << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Light-field reconstruction from a hybrid input"};
  app.require_subcommand(1);

  std::string scene_path, views = "3x3", size = "128x128", out_dir;
  int scale = 2;
  CLI::App* sim = app.add_subcommand("simulate",
                                     "Render a layered scene and its hybrid input");
  sim->add_option("--scene", scene_path, "scene description file")->required();
  sim->add_option("--views", views, "angular resolution MxN (odd)");
  sim->add_option("--size", size, "HR view size HxW");
  sim->add_option("--scale", scale, "downsampling factor for the side views");
  sim->add_option("--out", out_dir, "output directory")->required();

  std::string train_config, train_data, train_out;
  CLI::App* train = app.add_subcommand("train", "Train the two-branch model");
  train->add_option("--config", train_config, "key=value training config")->required();
  train->add_option("--data", train_data, "directory of light-field directories")->required();
  train->add_option("--out", train_out, "checkpoint output path")->required();

  std::string rec_ckpt, rec_input, rec_out, rec_gt;
  bool dump_intermediates = false;
  CLI::App* rec = app.add_subcommand("reconstruct",
                                     "Reconstruct an HR light field from a hybrid input");
  rec->add_option("--ckpt", rec_ckpt, "checkpoint path")->required();
  rec->add_option("--input", rec_input, "hybrid input directory")->required();
  rec->add_option("--out", rec_out, "output light-field directory")->required();
  rec->add_flag("--dump-intermediates", dump_intermediates,
                "also write per-branch views and attention maps");
  rec->add_option("--gt", rec_gt, "optional ground-truth directory for metrics");

  std::string eval_pred, eval_gt, eval_report;
  CLI::App* ev = app.add_subcommand("eval", "PSNR/SSIM/EPI-SSIM report");
  ev->add_option("--pred", eval_pred, "predicted light-field directory")->required();
  ev->add_option("--gt", eval_gt, "ground-truth light-field directory")->required();
  ev->add_option("--report", eval_report, "CSV report path")->required();

  std::string epi_lf, epi_out;
  int epi_row = 0, epi_urow = 1;
  CLI::App* epi = app.add_subcommand("epi", "Extract a horizontal EPI as a PNG");
  epi->add_option("--lf", epi_lf, "light-field directory")->required();
  epi->add_option("--row", epi_row, "image row (0-based)")->required();
  epi->add_option("--urow", epi_urow, "angular row (1-based)")->required();
  epi->add_option("--out", epi_out, "output PNG path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 1;
  }

  try {
    if (sim->parsed())
      return run_simulate(scene_path, views, size, scale, out_dir);
    if (train->parsed()) return run_train(train_config, train_data, train_out);
    if (rec->parsed())
      return run_reconstruct(rec_ckpt, rec_input, rec_out, dump_intermediates, rec_gt);
    if (ev->parsed()) return run_eval(eval_pred, eval_gt, eval_report);
    if (epi->parsed()) return run_epi(epi_lf, epi_row, epi_urow, epi_out);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const numeric_error& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
