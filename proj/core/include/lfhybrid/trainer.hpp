#pragma once

#include <string>
#include <vector>

#include "lfhybrid/adam.hpp"
#include "lfhybrid/augment.hpp"
#include "lfhybrid/model.hpp"

namespace lfhybrid {

struct TrainConfig {
  double lr0 = 1e-4;
  double decay = 0.5;
  int decay_period = 250;  // epochs between halvings
  int batch = 1;
  int patch = 128;  // HR patch size
  int epochs = 1;
  uint64_t seed = 0;
  LossWeights weights;
  bool augment_geometric = false;
  bool augment_color = false;
  ColorJitter jitter;
  AdamConfig adam;

  void validate() const;
};

/// lr0 * decay^floor(epoch / decay_period); non-increasing in epoch.
double lr_at(int epoch, const TrainConfig& cfg);

struct TrainLogRow {
  int iter = 0;
  double lr = 0, l_fusion = 0, l_sr = 0, l_warp = 0, l_smooth = 0, total = 0;
};

struct TrainLog {
  std::vector<TrainLogRow> rows;
  void save_csv(const std::string& path) const;
};

/// End-to-end optimization over a set of HR ground-truth light fields
/// (single channel). One epoch visits every scene once in a seeded shuffled
/// order; each iteration re-simulates the hybrid input, crops an aligned
/// patch, optionally augments, and takes one Adam step on the total loss.
///
/// Deterministic for a fixed seed. Aborts with numeric_error naming the
/// offending term and iteration if any loss becomes non-finite; throws
/// std::logic_error if some parameter receives no gradient.
TrainLog fit(Model<float>& model, const std::vector<LightField>& dataset,
             const TrainConfig& cfg, AdamOptimizer<float>* optimizer = nullptr);

}  // namespace lfhybrid
