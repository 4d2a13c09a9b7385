#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace cosmos {

/// Dimensions of the optically-controlled PCM array.
///
/// A bank is a grid of `tile_rows_per_bank x tile_cols_per_bank` tiles, each
/// tile an `n x n` grid of multi-level cells. A cache line is split into
/// `banks_per_cacheline` equal chunks, each occupying one full cell row of a
/// tile in a different bank of the same bank group.
struct ArrayGeometry {
  std::uint32_t bits_per_cell = 4;
  std::uint32_t cells_per_tile_side = 32;
  std::uint32_t tile_rows_per_bank = 512;
  std::uint32_t tile_cols_per_bank = 1024;
  std::uint32_t bank_count = 8;
  std::uint32_t banks_per_cacheline = 4;
  std::uint32_t cacheline_bytes = 64;

  std::uint64_t capacity_bits() const;
  std::uint64_t capacity_bytes() const { return capacity_bits() / 8; }
  std::uint32_t bank_groups() const { return bank_count / banks_per_cacheline; }
  std::uint32_t levels() const { return 1u << bits_per_cell; }
  std::uint32_t max_level() const { return levels() - 1; }
  // Bits carried by one bank's share of a cache line (one tile row).
  std::uint32_t chunk_bits() const { return cells_per_tile_side * bits_per_cell; }
  std::uint32_t cells_per_line() const { return banks_per_cacheline * cells_per_tile_side; }
  std::uint64_t line_count() const;
  std::uint64_t cell_count() const;
  std::uint32_t line_bits() const { return cacheline_bytes * 8; }

  friend bool operator==(const ArrayGeometry&, const ArrayGeometry&) = default;
};

/// Throws Error{NonPositiveDimension | ConstraintViolation} when an invariant fails.
void check_geometry(const ArrayGeometry& geom);

/// Builds a geometry from raw key/value pairs (keys as in the `[geometry]`
/// config section). An optional `capacity_bytes` key is checked against the
/// computed capacity.
ArrayGeometry validate_geometry(const std::map<std::string, std::string>& raw);

struct DecodedAddress {
  std::uint32_t bank_group = 0;
  std::uint32_t tile_row = 0;
  std::uint32_t tile_col = 0;
  std::uint32_t cell_row = 0;

  friend bool operator==(const DecodedAddress&, const DecodedAddress&) = default;
  friend auto operator<=>(const DecodedAddress&, const DecodedAddress&) = default;
};

// Field order, low to high: line offset | bank_group | cell_row | tile_col | tile_row.
// Fields are mixed-radix digits, which equals a plain bit-field split when every
// dimension is a power of two.
DecodedAddress decode_address(std::uint64_t addr, const ArrayGeometry& geom);
std::uint64_t encode_address(const DecodedAddress& d, const ArrayGeometry& geom);

struct SignalSet {
  std::uint32_t row_wavelength_index = 0;                 // 1..n
  std::vector<std::uint32_t> column_wavelength_indices;  // n+1..2n
  std::vector<std::uint32_t> mode_indices;               // 1-based spatial modes, one per bank

  friend bool operator==(const SignalSet&, const SignalSet&) = default;
};

SignalSet signals_for_access(const DecodedAddress& d, const ArrayGeometry& geom);

/// Zero-based bank index holding chunk `chunk` of a line in `bank_group`.
inline std::uint32_t bank_of_chunk(std::uint32_t bank_group, std::uint32_t chunk,
                                   const ArrayGeometry& geom) {
  return bank_group * geom.banks_per_cacheline + chunk;
}

}  // namespace cosmos
