#include "lfhybrid/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "lfhybrid/checkpoint.hpp"
#include "lfhybrid/simulate.hpp"

namespace lfhybrid {

void TrainConfig::validate() const {
  if (lr0 < 0.0) throw std::invalid_argument("lr0 must be non-negative");
  if (decay_period < 1) throw std::invalid_argument("decay period must be >= 1");
  if (batch != 1) throw std::invalid_argument("batch size must be 1");
  if (epochs < 0) throw std::invalid_argument("epochs must be >= 0");
  if (weights.lambda < 0 || weights.gamma < 0)
    throw std::invalid_argument("loss weights must be non-negative");
}

double lr_at(int epoch, const TrainConfig& cfg) {
  if (epoch < 0) throw std::invalid_argument("epoch must be >= 0");
  return cfg.lr0 * std::pow(cfg.decay, epoch / cfg.decay_period);
}

void TrainLog::save_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write training log: " + path);
  out << "iter,lr,l_fusion,l_sr,l_warp,l_smooth,total\n";
  out.precision(10);
  for (const TrainLogRow& r : rows)
    out << r.iter << ',' << r.lr << ',' << r.l_fusion << ',' << r.l_sr << ','
        << r.l_warp << ',' << r.l_smooth << ',' << r.total << "\n";
}

namespace {

void check_finite(double v, const char* term, int iter) {
  if (!std::isfinite(v))
    throw numeric_error("non-finite " + std::string(term) + " loss at iteration " +
                        std::to_string(iter));
}

}  // namespace

TrainLog fit(Model<float>& model, const std::vector<LightField>& dataset,
             const TrainConfig& cfg, AdamOptimizer<float>* optimizer) {
  cfg.validate();
  if (dataset.empty()) throw std::invalid_argument("empty training dataset");
  for (const LightField& lf : dataset) {
    if (lf.rows != model.cfg.rows || lf.cols != model.cfg.cols)
      throw std::invalid_argument("dataset view grid does not match the model");
    if (lf.channels() != 1)
      throw std::invalid_argument("training light fields must be single channel");
  }

  AdamOptimizer<float> local_opt;
  if (!optimizer) {
    local_opt = make_optimizer(model, cfg.adam);
    optimizer = &local_opt;
  }

  Rng rng(cfg.seed);
  TrainLog log;
  int iter = 0;
  std::vector<size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), size_t{0});

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double lr = lr_at(epoch, cfg);
    // Seeded shuffle; one pass over the dataset per epoch.
    for (size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[rng.below(i)]);

    for (size_t scene_idx : order) {
      const LightField* lf = &dataset[scene_idx];

      LightField augmented;
      if (cfg.augment_geometric) {
        // One of {none, flip_h, flip_v, transpose}; transpose only on
        // square angular grids.
        const int pick = rng.range(0, lf->rows == lf->cols ? 3 : 2);
        if (pick > 0) {
          augmented = geometric_augment(*lf, static_cast<GeometricOp>(pick - 1));
          lf = &augmented;
        }
      }

      HybridInput hybrid = simulate_hybrid(*lf, model.cfg.scale);
      TrainingSample sample = sample_patch(*lf, hybrid, cfg.patch, rng);
      if (cfg.augment_color)
        sample.hybrid = color_augment(sample.hybrid, cfg.jitter, rng.next_u64());

      optimizer->zero_grads();
      Graph<float> g;
      const ModelForwardIds ids =
          model_forward(g, model, sample.hybrid, &sample.gt, cfg.weights);

      TrainLogRow row;
      row.iter = iter;
      row.lr = lr;
      row.l_fusion = g.value(ids.losses.fusion).v[0];
      row.l_sr = g.value(ids.losses.sr).v[0];
      row.l_warp = g.value(ids.losses.warp).v[0];
      row.l_smooth = g.value(ids.losses.smooth).v[0];
      row.total = g.value(ids.losses.total).v[0];
      check_finite(row.l_fusion, "fusion", iter);
      check_finite(row.l_sr, "sr", iter);
      check_finite(row.l_warp, "warp", iter);
      check_finite(row.l_smooth, "smoothness", iter);
      check_finite(row.total, "total", iter);

      g.backward(ids.losses.total);

      // Every parameter must be reachable from the loss.
      model.visit_params([](const std::string& name, Tensor<float>& t) {
        if (!t.grad_touched)
          throw std::logic_error("parameter received no gradient: " + name);
      });

      optimizer->step(lr);
      log.rows.push_back(row);
      ++iter;
    }
  }
  return log;
}

}  // namespace lfhybrid
