#pragma once

#include <cmath>
#include <cstdint>

namespace cosmos {

// Simulation time is kept in integer picoseconds so event ordering never
// depends on floating-point rounding.
using TimePs = std::int64_t;

inline constexpr TimePs kPsPerNs = 1000;

inline TimePs ns_to_ps(double ns) { return static_cast<TimePs>(std::llround(ns * kPsPerNs)); }
inline constexpr double ps_to_ns(TimePs ps) { return static_cast<double>(ps) / kPsPerNs; }

inline constexpr double kBytesPerMiB = 1024.0 * 1024.0;

}  // namespace cosmos
