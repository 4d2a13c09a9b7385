#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "cosmos/opcm_array.hpp"

namespace cosmos {

struct LifetimeParams {
  double size_bytes = 2147483648.0;
  double max_writes_per_cell = 1e6;
  double bytes_per_cycle = 1.0;  // combined read + write traffic
  double frequency_hz = 1e9;
};

/// Y = S * W_m / (B * F * 2^25). Throws Error{NonPositiveInput}.
double lifetime_years(const LifetimeParams& p);

struct WearReport {
  std::uint32_t max_writes_per_cell = 0;
  double mean_writes_per_cell = 0.0;  // over every cell of the geometry
  std::uint64_t total_cell_writes = 0;
  std::uint64_t touched_cells = 0;
  std::vector<std::uint64_t> per_bank_writes;
  std::map<std::uint32_t, std::uint64_t> write_count_histogram;  // nonzero counts only
};

WearReport wear_report(const OpcmArray& array);

}  // namespace cosmos
