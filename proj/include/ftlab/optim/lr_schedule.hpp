#pragma once

#include <cstdint>

namespace ftlab {

// Linear warmup from 0 to base_lr over warmup_steps, then linear decay to 0
// at total_steps. Requires 0 <= step <= total_steps and warmup <= total.
double lr_at(std::int64_t step, std::int64_t total_steps, std::int64_t warmup_steps, double base_lr);

}  // namespace ftlab
