#include "cosmos/endurance.hpp"

#include <algorithm>
#include <cmath>

#include "cosmos/error.hpp"

namespace cosmos {

double lifetime_years(const LifetimeParams& p) {
  if (!(p.size_bytes > 0 && p.max_writes_per_cell > 0 && p.bytes_per_cycle > 0 &&
        p.frequency_hz > 0)) {
    throw Error(ErrorCode::NonPositiveInput, "lifetime inputs must all be > 0");
  }
  constexpr double kTwoPow25 = 33554432.0;
  return p.size_bytes * p.max_writes_per_cell / (p.bytes_per_cycle * p.frequency_hz * kTwoPow25);
}

WearReport wear_report(const OpcmArray& array) {
  const auto& geom = array.geometry();
  WearReport r;
  r.per_bank_writes.assign(geom.bank_count, 0);
  array.for_each_row([&](std::uint32_t bank, std::uint32_t, std::uint32_t, std::uint32_t,
                         std::span<const CellState> cells) {
    for (const auto& c : cells) {
      if (c.write_count == 0) continue;
      r.max_writes_per_cell = std::max(r.max_writes_per_cell, c.write_count);
      r.total_cell_writes += c.write_count;
      r.per_bank_writes[bank] += c.write_count;
      ++r.touched_cells;
      ++r.write_count_histogram[c.write_count];
    }
  });
  r.mean_writes_per_cell =
      static_cast<double>(r.total_cell_writes) / static_cast<double>(geom.cell_count());
  return r;
}

}  // namespace cosmos
