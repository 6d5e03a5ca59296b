// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// fail. Tolerances are fixed here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "lfhybrid/augment.hpp"
#include "lfhybrid/checkpoint.hpp"
#include "lfhybrid/convert.hpp"
#include "lfhybrid/fusion.hpp"
#include "lfhybrid/grad_check.hpp"
#include "lfhybrid/metrics.hpp"
#include "lfhybrid/model.hpp"
#include "lfhybrid/reconstruct.hpp"
#include "lfhybrid/resample.hpp"
#include "lfhybrid/scene.hpp"
#include "lfhybrid/simulate.hpp"
#include "lfhybrid/structure.hpp"
#include "lfhybrid/trainer.hpp"
#include "support/oracles.hpp"

using namespace lfhybrid;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("[%s] criterion %d: %-28s %s\n", pass ? "PASS" : "FAIL", criterion,
              name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. gradient suite
// ---------------------------------------------------------------------------

void criterion_gradients() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(101);
  double worst_smooth = 0.0, worst_warp_disp = 0.0;

  auto track = [&worst_smooth](double err) {
    worst_smooth = std::max(worst_smooth, err);
  };

  {  // conv2d, stride 1 and 2, 3x3 and 1x1
    for (int stride : {1, 2}) {
      Tensor<double> x = oracle::random_tensor<double>(2, 5, 5, rng);
      Tensor<double> w = oracle::random_tensor<double>(2, 2, 9, rng, -0.5, 0.5);
      Tensor<double> b = oracle::random_tensor<double>(2, 1, 1, rng);
      Tensor<double> pat = oracle::random_tensor<double>(2, stride == 1 ? 5 : 3,
                                                         stride == 1 ? 5 : 3, rng);
      track(grad_check(
          [&](Graph<double>& g) {
            return g.sum(g.mul(g.conv2d(g.leaf(x), g.leaf(w), g.leaf(b), stride),
                               g.constant(pat)));
          },
          {&x, &w, &b}, 1e-5));
    }
    Tensor<double> x = oracle::random_tensor<double>(3, 4, 4, rng);
    Tensor<double> w = oracle::random_tensor<double>(2, 3, 1, rng);
    Tensor<double> b = oracle::random_tensor<double>(2, 1, 1, rng);
    track(grad_check(
        [&](Graph<double>& g) {
          return g.sum(g.conv2d(g.leaf(x), g.leaf(w), g.leaf(b)));
        },
        {&x, &w, &b}, 1e-5));
  }
  {  // dense block
    DenseBlockParams<double> p = make_dense_block<double>(2, 2, 3, 4, rng);
    Tensor<double> x = oracle::random_tensor<double>(2, 4, 4, rng);
    Tensor<double> pat = oracle::random_tensor<double>(4, 4, 4, rng);
    std::vector<Tensor<double>*> leaves{&x};
    p.visit("", [&leaves](const std::string&, Tensor<double>& t) {
      leaves.push_back(&t);
    });
    track(grad_check(
        [&](Graph<double>& g) {
          return g.sum(g.mul(dense_block(g, g.leaf(x), p), g.constant(pat)));
        },
        leaves, 1e-5));
  }
  {  // pixel shuffle
    Tensor<double> x = oracle::random_tensor<double>(8, 3, 3, rng);
    Tensor<double> pat = oracle::random_tensor<double>(2, 6, 6, rng);
    track(grad_check(
        [&](Graph<double>& g) {
          return g.sum(g.mul(g.pixel_shuffle(g.leaf(x), 2), g.constant(pat)));
        },
        {&x}, 1e-5));
  }
  {  // bicubic upsampling (disparity mode)
    Tensor<double> x = oracle::random_tensor<double>(1, 4, 4, rng);
    Tensor<double> pat = oracle::random_tensor<double>(1, 8, 8, rng);
    track(grad_check(
        [&](Graph<double>& g) {
          return g.sum(g.mul(g.upsample_bicubic(g.leaf(x), 2, true), g.constant(pat)));
        },
        {&x}, 1e-5));
  }
  {  // inverse warp: image side is smooth, disparity side gets 1e-3
    Tensor<double> img = oracle::random_tensor<double>(1, 6, 6, rng, 0.0, 1.0);
    Tensor<double> disp(1, 6, 6);
    for (double& v : disp.v) v = rng.uniform(-0.7, 0.7) + 0.25;
    Tensor<double> pat = oracle::random_tensor<double>(1, 6, 6, rng);
    track(grad_check(
        [&](Graph<double>& g) {
          return g.sum(g.mul(g.warp_bicubic(g.leaf(img), g.constant(disp), 1.0, -1.0),
                             g.constant(pat)));
        },
        {&img}, 1e-5));
    worst_warp_disp = std::max(
        worst_warp_disp,
        grad_check(
            [&](Graph<double>& g) {
              return g.sum(
                  g.mul(g.warp_bicubic(g.constant(img), g.leaf(disp), 1.0, -1.0),
                        g.constant(pat)));
            },
            {&disp}, 1e-5));
  }
  {  // softmax pair
    Tensor<double> a = oracle::random_tensor<double>(1, 4, 4, rng, -6.0, 6.0);
    Tensor<double> b = oracle::random_tensor<double>(1, 4, 4, rng, -6.0, 6.0);
    Tensor<double> wa = oracle::random_tensor<double>(1, 4, 4, rng);
    Tensor<double> wb = oracle::random_tensor<double>(1, 4, 4, rng);
    track(grad_check(
        [&](Graph<double>& g) {
          auto [pa, pb] = g.softmax_pair(g.leaf(a), g.leaf(b));
          return g.add(g.sum(g.mul(pa, g.constant(wa))),
                       g.sum(g.mul(pb, g.constant(wb))));
        },
        {&a, &b}, 1e-5));
  }
  {  // losses: L1 away from kinks, edge-aware smoothness, and their weighted sum
    Tensor<double> pred(1, 5, 5), target(1, 5, 5);
    for (size_t i = 0; i < pred.v.size(); ++i) {
      target.v[i] = rng.uniform();
      pred.v[i] = target.v[i] + (rng.uniform() < 0.5 ? -0.25 : 0.25);
    }
    // Disparity with neighbor differences bounded away from the |.| kinks,
    // covering both difference signs.
    Tensor<double> disp(1, 5, 5);
    for (int y = 0; y < 5; ++y)
      for (int x = 0; x < 5; ++x)
        disp.at(0, y, x) = 0.4 * x - 0.4 * y + 0.3 * std::sin(0.9 * x + 0.4 * y);
    track(grad_check(
        [&](Graph<double>& g) {
          const int l1 = g.l1_loss(g.leaf(pred), g.constant(target));
          const int sm =
              g.smoothness_loss(g.leaf(disp), g.constant(target), 150.0);
          return g.add(l1, g.scale(sm, 0.1));
        },
        {&pred, &disp}, 1e-5));
  }

  const double elapsed = seconds_since(t0);
  const bool pass = worst_smooth < 1e-4 && worst_warp_disp < 1e-3 && elapsed < 60.0;
  report(1, "gradient suite", pass,
         fmt("max err %.3g (smooth, tol 1e-4), %.3g (warp/disparity, tol 1e-3), %.1f s",
             worst_smooth, worst_warp_disp, elapsed));
}

// ---------------------------------------------------------------------------
// 2. warp identities
// ---------------------------------------------------------------------------

void criterion_warp_identities() {
  Rng rng(202);
  Image img = oracle::random_image(1, 12, 12, rng);
  Tensor<float> timg = tensor_from_image<float>(img);
  bool zero_ok = true, shift_ok = true;
  float half_err = 0.0f;

  {
    Tensor<float> disp(1, 12, 12, 0.0f);
    Graph<float> g;
    const int y = g.warp_bicubic(g.constant(timg), g.constant(disp), 1.0, 1.0);
    for (size_t i = 0; i < timg.v.size(); ++i)
      zero_ok = zero_ok && g.value(y).v[i] == timg.v[i];
  }
  {
    Tensor<float> disp(1, 12, 12, 2.0f);
    Graph<float> g;
    const int y = g.warp_bicubic(g.constant(timg), g.constant(disp), 0.0, 1.0);
    for (int yy = 0; yy < 12; ++yy)
      for (int xx = 0; xx < 10; ++xx)
        shift_ok = shift_ok && g.value(y).at(0, yy, xx) == timg.at(0, yy, xx + 2);
  }
  {
    Tensor<float> disp(1, 12, 12, 0.5f);
    Graph<float> g;
    const int y = g.warp_bicubic(g.constant(timg), g.constant(disp), 1.0, 0.0);
    for (int yy = 0; yy < 12; ++yy)
      for (int xx = 0; xx < 12; ++xx)
        half_err = std::max(half_err,
                            std::abs(g.value(y).at(0, yy, xx) -
                                     static_cast<float>(oracle::bicubic_sample(
                                         img, 0, yy + 0.5, xx))));
  }
  const bool pass = zero_ok && shift_ok && half_err < 1e-6f;
  report(2, "warp identities", pass,
         fmt("zero-disparity bit-equal: %s, integer shift: %s, half-phase err %.2g",
             zero_ok ? "yes" : "NO", shift_ok ? "yes" : "NO", half_err));
}

// ---------------------------------------------------------------------------
// 3. parallax-structure invariant
// ---------------------------------------------------------------------------

void criterion_structure() {
  float worst = 0.0f, worst_aug = 0.0f;
  float best_violation = 0.0f;
  for (uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(3000 + seed);
    SyntheticScene scene = make_random_scene(96, 96, 1, seed % 3 == 0 ? 2 : 1,
                                             4.0, rng);
    RenderResult r = render_scene(scene, 3, 3, 96, 96);
    worst = std::max(worst,
                     structure_residual(r.lf, r.gt_disparity, r.occlusion_mask));

    for (GeometricOp op :
         {GeometricOp::flip_h, GeometricOp::flip_v, GeometricOp::transpose}) {
      AugmentedScene aug =
          geometric_augment(r.lf, r.gt_disparity, &r.occlusion_mask, op);
      worst_aug = std::max(
          worst_aug,
          structure_residual(aug.lf, aug.gt_disparity, aug.occlusion_mask));
    }

    // naive spatial-only flip must break the structure on a textured scene
    if (std::abs(scene.layers[0].disparity) > 0.5f) {
      std::vector<Image> naive;
      for (const Image& view : r.lf.views) naive.push_back(flip_image_cols(view));
      LightField broken = make_light_field(std::move(naive), 3, 3);
      best_violation = std::max(
          best_violation,
          structure_residual(broken, flip_image_cols(r.gt_disparity),
                             flip_image_cols(r.occlusion_mask)));
    }
  }
  const bool pass = worst < 1e-3f && worst_aug < 1e-3f && best_violation > 0.1f;
  report(3, "parallax structure", pass,
         fmt("residual %.2g (tol 1e-3), after joint augmentation %.2g, "
             "naive-flip violation %.2g (> 0.1)",
             worst, worst_aug, best_violation));
}

// ---------------------------------------------------------------------------
// 4. fusion contracts
// ---------------------------------------------------------------------------

void criterion_fusion() {
  Rng rng(404);
  bool sum_ok = true, envelope_ok = true, average_ok = true;
  for (int trial = 0; trial < 4; ++trial) {
    Tensor<float> sr = oracle::random_tensor<float>(1, 8, 8, rng, 0.0, 1.0);
    Tensor<float> warp = oracle::random_tensor<float>(1, 8, 8, rng, 0.0, 1.0);
    Tensor<float> la = oracle::random_tensor<float>(1, 8, 8, rng, -12.0, 12.0);
    Tensor<float> lb = oracle::random_tensor<float>(1, 8, 8, rng, -12.0, 12.0);
    Graph<float> g;
    FusionIds f = fuse(g, {g.constant(sr)}, {g.constant(warp)}, {g.constant(la)},
                       {g.constant(lb)});
    for (size_t i = 0; i < sr.v.size(); ++i) {
      const float csr = g.value(f.attn_sr[0]).v[i];
      const float cwp = g.value(f.attn_warp[0]).v[i];
      sum_ok = sum_ok && std::abs(csr + cwp - 1.0f) < 1e-6f;
      const float fused = g.value(f.fused[0]).v[i];
      envelope_ok = envelope_ok && fused >= std::min(sr.v[i], warp.v[i]) - 1e-6f &&
                    fused <= std::max(sr.v[i], warp.v[i]) + 1e-6f;
    }
    // equal logits give the exact average
    Graph<float> g2;
    FusionIds f2 = fuse(g2, {g2.constant(sr)}, {g2.constant(warp)},
                        {g2.constant(la)}, {g2.constant(la)});
    for (size_t i = 0; i < sr.v.size(); ++i) {
      const float expect = sr.v[i] * 0.5f + warp.v[i] * 0.5f;
      average_ok = average_ok && g2.value(f2.fused[0]).v[i] == expect;
    }
  }
  report(4, "fusion contracts", sum_ok && envelope_ok && average_ok,
         fmt("weights sum to 1: %s, envelope: %s, equal-logit average: %s",
             sum_ok ? "yes" : "NO", envelope_ok ? "yes" : "NO",
             average_ok ? "yes" : "NO"));
}

// ---------------------------------------------------------------------------
// 5. zero-parameter semantics
// ---------------------------------------------------------------------------

ModelConfig acceptance_model_config() {
  ModelConfig mc;
  mc.rows = 3;
  mc.cols = 3;
  mc.scale = 2;
  mc.sr.base_width = 12;
  mc.sr.dense_layers = 2;
  mc.sr.growth = 6;
  mc.sr.hr_layers = 2;
  mc.sr.view_feat = 4;
  mc.sr.scale = 2;
  mc.warp.base_width = 12;
  mc.warp.unet_levels = 3;
  mc.warp.dense_layers = 2;
  mc.warp.growth = 6;
  mc.warp.refine_feat = 8;
  mc.warp.scale = 2;
  return mc;
}

void criterion_zero_semantics() {
  Rng rng(505);
  SyntheticScene scene = make_random_scene(64, 64, 1, 1, 1.5, rng);
  RenderResult r = render_scene(scene, 3, 3, 64, 64);
  HybridInput hybrid = simulate_hybrid(r.lf, 2);
  Model<float> model = Model<float>::zeros(acceptance_model_config());

  ReconstructResult res = reconstruct(model, hybrid);
  bool sr_ok = true, warp_ok = true, central_ok = true;
  const auto coords = side_coords(3, 3);
  for (size_t i = 0; i < coords.size(); ++i) {
    const Image bic = bicubic_resize(hybrid.side_views[i], 64, 64);
    sr_ok = sr_ok && max_abs_diff(res.sr_views[i], bic) == 0.0f;
    warp_ok = warp_ok && max_abs_diff(res.warp_views[i], hybrid.central_hr) == 0.0f;
  }
  for (size_t i = 0; i < hybrid.central_hr.data.size(); ++i)
    central_ok = central_ok &&
                 res.output.view(2, 2).data[i] == hybrid.central_hr.data[i];
  report(5, "zero-parameter semantics", sr_ok && warp_ok && central_ok,
         fmt("sr = bicubic: %s, warp = central: %s, central passthrough: %s",
             sr_ok ? "yes" : "NO", warp_ok ? "yes" : "NO",
             central_ok ? "yes" : "NO"));
}

// ---------------------------------------------------------------------------
// 6 + 7. toy training experiment and structure evaluation
// ---------------------------------------------------------------------------

struct ToyData {
  std::vector<LightField> train;
  RenderResult held_out;
  RenderResult constant_scene;
  float constant_disparity = 1.5f;
};

ToyData make_toy_data() {
  ToyData data;
  const TextureProfile profile = detailed_texture_profile();
  for (uint64_t i = 0; i < 6; ++i) {
    Rng rng(6000 + i);
    SyntheticScene scene = make_random_scene(128, 128, 1, 1, 2.0, rng, profile);
    data.train.push_back(render_scene(scene, 3, 3, 128, 128).lf);
  }
  {
    Rng rng(6100);
    SyntheticScene scene = make_random_scene(128, 128, 1, 1, 2.0, rng, profile);
    data.held_out = render_scene(scene, 3, 3, 128, 128);
  }
  {
    Rng rng(6200);
    SyntheticScene scene;
    SceneLayer layer;
    layer.texture = make_procedural_texture(128, 128, 1, rng, profile);
    layer.disparity = data.constant_disparity;
    scene.layers.push_back(layer);
    data.constant_scene = render_scene(scene, 3, 3, 128, 128);
  }
  return data;
}

float side_view_psnr(const std::vector<Image>& views, const LightField& gt) {
  const auto coords = side_coords(gt.rows, gt.cols);
  double acc = 0;
  for (size_t i = 0; i < coords.size(); ++i)
    acc += psnr(views[i], gt.view(coords[i]));
  return static_cast<float>(acc / coords.size());
}

void criterion_training(Model<float>* trained_out, ToyData* data_out) {
  const auto t0 = std::chrono::steady_clock::now();
  ToyData data = make_toy_data();

  TrainConfig cfg;
  cfg.lr0 = 1e-3;
  cfg.decay = 0.5;
  cfg.decay_period = 60;
  cfg.patch = 96;
  cfg.epochs = 130;  // 6 iterations per epoch -> 780 iterations
  cfg.seed = 42;
  cfg.augment_geometric = true;

  Model<float> model = Model<float>::init(acceptance_model_config(), 42);
  TrainLog log = fit(model, data.train, cfg);

  const size_t per_epoch = data.train.size();
  double initial = 0, final_ = 0;
  for (size_t i = 0; i < per_epoch; ++i) {
    initial += log.rows[i].total;
    final_ += log.rows[log.rows.size() - 1 - i].total;
  }
  initial /= per_epoch;
  final_ /= per_epoch;
  const bool loss_ok = final_ <= 0.2 * initial;

  // (b) held-out scene: fused vs bicubic baseline and vs each branch
  HybridInput held_hybrid = simulate_hybrid(data.held_out.lf, 2);
  ReconstructResult res = reconstruct(model, held_hybrid);
  const auto coords = side_coords(3, 3);
  std::vector<Image> fused_views, bic_views;
  for (const AngularCoord& a : coords)
    fused_views.push_back(res.output.view(a));
  LightField baseline = bicubic_baseline(held_hybrid);
  for (const AngularCoord& a : coords) bic_views.push_back(baseline.view(a));

  const float psnr_fused = side_view_psnr(fused_views, data.held_out.lf);
  const float psnr_bic = side_view_psnr(bic_views, data.held_out.lf);
  const float psnr_sr = side_view_psnr(res.sr_views, data.held_out.lf);
  const float psnr_warp = side_view_psnr(res.warp_views, data.held_out.lf);
  const bool psnr_ok = psnr_fused >= psnr_bic + 1.0f &&
                       psnr_fused >= psnr_sr - 0.3f &&
                       psnr_fused >= psnr_warp - 0.3f;

  // (c) disparity accuracy on a constant-disparity scene, textured
  // non-occluded pixels only
  HybridInput const_hybrid = simulate_hybrid(data.constant_scene.lf, 2);
  ReconstructResult const_res = reconstruct(model, const_hybrid);
  const Image& central = data.constant_scene.lf.view(2, 2);
  std::vector<float> errors;
  for (size_t vi = 0; vi < coords.size(); ++vi) {
    const Image& dmap = const_res.d_h.maps[vi];
    for (int y = 0; y < central.height - 1; ++y)
      for (int x = 0; x < central.width - 1; ++x) {
        if (data.constant_scene.occlusion_mask.at(0, y, x) > 0.0f) continue;
        const float gx = std::abs(central.at(0, y, x + 1) - central.at(0, y, x));
        const float gy = std::abs(central.at(0, y + 1, x) - central.at(0, y, x));
        if (gx + gy < 0.02f) continue;  // textureless
        errors.push_back(std::abs(dmap.at(0, y, x) - data.constant_disparity));
      }
  }
  float median_err = std::numeric_limits<float>::infinity();
  if (!errors.empty()) {
    std::nth_element(errors.begin(), errors.begin() + errors.size() / 2,
                     errors.end());
    median_err = errors[errors.size() / 2];
  }
  const bool disp_ok = median_err < 0.5f;

  const double elapsed = seconds_since(t0);
  const bool pass = loss_ok && psnr_ok && disp_ok && elapsed < 900.0;
  report(6, "toy training experiment", pass,
         fmt("loss %.3f -> %.3f (<= 0.2x: %s); PSNR fused %.2f, bicubic %.2f, "
             "sr %.2f, warp %.2f (%s); median |D-d| %.3f px (< 0.5: %s); %.0f s",
             initial, final_, loss_ok ? "yes" : "NO", psnr_fused, psnr_bic,
             psnr_sr, psnr_warp, psnr_ok ? "ok" : "NO", median_err,
             disp_ok ? "yes" : "NO", elapsed));

  // 7. EPI-SSIM of the fused output vs the bicubic baseline on the held-out
  // scene (structure evaluation)
  const float epi_fused = epi_ssim(res.output, data.held_out.lf);
  const float epi_bic = epi_ssim(baseline, data.held_out.lf);
  report(7, "structure evaluation", epi_fused > epi_bic,
         fmt("EPI-SSIM fused %.4f > bicubic %.4f", epi_fused, epi_bic));

  *trained_out = std::move(model);
  *data_out = std::move(data);
}

// ---------------------------------------------------------------------------
// 8. determinism & persistence
// ---------------------------------------------------------------------------

void criterion_determinism(Model<float>& trained, const ToyData& data) {
  TrainConfig cfg;
  cfg.lr0 = 1e-3;
  cfg.epochs = 5;
  cfg.patch = 64;
  cfg.seed = 77;
  cfg.augment_geometric = true;

  std::vector<LightField> subset{data.train[0], data.train[1]};
  Model<float> a = Model<float>::init(acceptance_model_config(), 7);
  Model<float> b = Model<float>::init(acceptance_model_config(), 7);
  TrainLog la = fit(a, subset, cfg);
  TrainLog lb = fit(b, subset, cfg);
  bool curve_ok = la.rows.size() == lb.rows.size();
  double max_diff = 0;
  if (curve_ok)
    for (size_t i = 0; i < la.rows.size(); ++i)
      max_diff = std::max(max_diff, std::abs(la.rows[i].total - lb.rows[i].total));
  curve_ok = curve_ok && max_diff <= 1e-6;

  // checkpoint round trip on the trained model reproduces the forward pass
  // bit-exactly
  HybridInput hybrid = simulate_hybrid(data.held_out.lf, 2);
  ReconstructResult before = reconstruct(trained, hybrid);
  const std::string path =
      (std::filesystem::temp_directory_path() / "lfhybrid_acceptance.ckpt").string();
  save_checkpoint(path, trained);
  LoadedCheckpoint loaded = load_checkpoint(path);
  ReconstructResult after = reconstruct(loaded.model, hybrid);
  bool ckpt_ok = true;
  for (int u = 1; u <= 3 && ckpt_ok; ++u)
    for (int v = 1; v <= 3 && ckpt_ok; ++v)
      for (size_t i = 0; i < before.output.view(u, v).data.size(); ++i)
        if (before.output.view(u, v).data[i] != after.output.view(u, v).data[i]) {
          ckpt_ok = false;
          break;
        }
  std::remove(path.c_str());

  report(8, "determinism & persistence", curve_ok && ckpt_ok,
         fmt("loss-curve max diff %.2g (tol 1e-6), checkpoint round trip "
             "bit-exact: %s",
             max_diff, ckpt_ok ? "yes" : "NO"));
}

// ---------------------------------------------------------------------------
// 9. scalar Adam oracle
// ---------------------------------------------------------------------------

void criterion_adam() {
  Tensor<double> p(1, 1, 1, 1.0);
  AdamOptimizer<double> opt({&p});
  double x = 1.0, m = 0.0, v = 0.0;
  const double lr = 0.1, b1 = 0.9, b2 = 0.999, eps = 1e-8;
  double max_err = 0.0;
  bool decreasing = true;
  double prev = std::abs(x);
  for (int t = 1; t <= 10; ++t) {
    const double g = 2.0 * x;
    m = b1 * m + (1 - b1) * g;
    v = b2 * v + (1 - b2) * g * g;
    x -= lr * (m / (1 - std::pow(b1, t))) /
         (std::sqrt(v / (1 - std::pow(b2, t))) + eps);
    decreasing = decreasing && std::abs(x) < prev;
    prev = std::abs(x);

    p.zero_grad();
    p.ensure_grad();
    p.g[0] = 2.0 * p.v[0];
    opt.step(lr);
    max_err = std::max(max_err, std::abs(p.v[0] - x));
  }
  report(9, "scalar Adam oracle", max_err < 1e-10 && decreasing,
         fmt("10-step max deviation %.2g (tol 1e-10), |x| strictly decreasing: %s",
             max_err, decreasing ? "yes" : "NO"));
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  criterion_gradients();
  criterion_warp_identities();
  criterion_structure();
  criterion_fusion();
  criterion_zero_semantics();

  Model<float> trained;
  ToyData data;
  criterion_training(&trained, &data);
  criterion_determinism(trained, data);
  criterion_adam();

  std::printf("%d of 9 criteria passed (%.0f s total)\n", 9 - g_failures,
              seconds_since(t0));
  return g_failures == 0 ? 0 : 1;
}
