#pragma once

#include <cstdint>

namespace freqsim {

// Discrete simulation time. All durations, deadlines and horizons are
// integer ticks; compute costs are stated in ticks at nominal frequency
// (1 cycle == 1 tick at phi = 1).
using Tick = std::int64_t;

using TaskId = std::int32_t;

inline constexpr const char* kToolVersion = "0.1.0";

// Lowest frequency fraction the toolkit will ever probe or report.
inline constexpr double kPhiFloor = 0.01;

// Default guard for the brute-force oracle: horizon * max(1, tasks).
inline constexpr std::int64_t kDefaultBruteForceCap = 50'000'000;

}  // namespace freqsim
