#include "ftlab/optim/lr_schedule.hpp"

#include <cmath>

#include "ftlab/errors.hpp"

namespace ftlab {

double lr_at(std::int64_t step, std::int64_t total_steps, std::int64_t warmup_steps, double base_lr) {
  if (total_steps < 1 || warmup_steps < 0 || warmup_steps > total_steps || step < 0 || step > total_steps)
    throw InvalidArgument("lr_at: require 0 <= step <= total, 0 <= warmup <= total, total >= 1");
  if (!(base_lr >= 0.0) || !std::isfinite(base_lr)) throw InvalidArgument("lr_at: base_lr must be finite and >= 0");
  if (step < warmup_steps) return base_lr * static_cast<double>(step) / static_cast<double>(warmup_steps);
  if (total_steps == warmup_steps) return base_lr;
  return base_lr * static_cast<double>(total_steps - step) / static_cast<double>(total_steps - warmup_steps);
}

}  // namespace ftlab
