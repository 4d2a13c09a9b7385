#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <unordered_map>
#include <vector>

#include "cosmos/device_model.hpp"
#include "cosmos/geometry.hpp"

namespace cosmos {

using CacheLine = std::vector<std::uint8_t>;

/// Splits a cache line into one level per cell. Cell c holds line bits
/// [c*b, c*b + b), little-endian within each byte; chunk k (bank k of the
/// group) owns cells [k*n, (k+1)*n).
std::vector<std::uint8_t> levels_from_line(std::span<const std::uint8_t> line,
                                           const ArrayGeometry& geom);
CacheLine line_from_levels(std::span<const std::uint8_t> levels, const ArrayGeometry& geom);

/// Sensing record of the three-step destructive read of one cache line.
/// Index i runs over the line's cell columns (chunk-major).
struct ReadTranscript {
  std::vector<double> first_intensity;   // before RESET of the target row
  std::vector<double> second_intensity;  // after RESET
  std::vector<double> first_voltage;
  std::vector<double> second_voltage;
  std::vector<std::uint8_t> levels;
  CacheLine data;
};

/// Sparse cell store for the whole multi-bank array. Untouched rows are
/// implicitly amorphous with zero wear.
class OpcmArray {
 public:
  OpcmArray(ArrayGeometry geom, TransmissionModel model);

  const ArrayGeometry& geometry() const { return geom_; }
  const TransmissionModel& model() const { return model_; }

  /// Programs the target row of each bank in the line's group; every
  /// programmed cell gains one write.
  void write_line(const DecodedAddress& where, std::span<const std::uint8_t> data);

  /// Sense, RESET the target row, sense again, decode from the per-column
  /// intensity ratio. The row is left amorphous. `noise_amplitude` > 0
  /// perturbs every sensed intensity by a uniform relative error.
  ReadTranscript read_line(const DecodedAddress& where, double noise_amplitude = 0.0,
                           std::mt19937_64* rng = nullptr);

  /// Stored content decoded directly from cell levels; does not disturb the array.
  CacheLine peek_line(const DecodedAddress& where) const;

  CellState cell(std::uint32_t bank, std::uint32_t tile_row, std::uint32_t tile_col,
                 std::uint32_t cell_row, std::uint32_t cell_col) const;

  using RowVisitor = std::function<void(std::uint32_t bank, std::uint32_t tile_row,
                                        std::uint32_t tile_col, std::uint32_t cell_row,
                                        std::span<const CellState> cells)>;
  /// Visits every materialised row in a deterministic (sorted) order.
  void for_each_row(const RowVisitor& visit) const;

  std::uint64_t total_cell_writes() const { return total_cell_writes_; }

 private:
  struct Tile {
    std::vector<std::vector<CellState>> rows;  // empty row = untouched
  };

  std::uint64_t tile_key(std::uint32_t bank, std::uint32_t tile_row, std::uint32_t tile_col) const;
  Tile& tile(std::uint64_t key);
  const Tile* find_tile(std::uint64_t key) const;

  ArrayGeometry geom_;
  TransmissionModel model_;
  std::vector<double> level_transmission_;
  std::unordered_map<std::uint64_t, Tile> tiles_;
  std::uint64_t total_cell_writes_ = 0;
};

}  // namespace cosmos
