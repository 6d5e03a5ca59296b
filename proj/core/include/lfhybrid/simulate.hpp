#pragma once

#include "lfhybrid/light_field.hpp"
#include "lfhybrid/rng.hpp"

namespace lfhybrid {

/// Simulated hybrid capture: side views bicubically downsampled by `scale`,
/// central view kept at full resolution. The ground truth of the pair is
/// `lf_hr` itself. Requires H and W divisible by scale.
HybridInput simulate_hybrid(const LightField& lf_hr, int scale);

struct TrainingSample {
  LightField gt;       // HR patch light field
  HybridInput hybrid;  // aligned crops of the hybrid input
};

/// Aligned random crops: an HR window of `size` x `size` at (scale*r, scale*c)
/// from every ground-truth view and the central input, and the corresponding
/// size/scale window at (r, c) from every LR side view. `size` must be
/// divisible by the hybrid's scale and fit inside the views.
TrainingSample sample_patch(const LightField& lf_hr, const HybridInput& hybrid,
                            int size, Rng& rng);

/// Deterministic variant with an explicit LR-grid corner (row, col).
TrainingSample crop_patch(const LightField& lf_hr, const HybridInput& hybrid,
                          int size, int lr_row, int lr_col);

}  // namespace lfhybrid
