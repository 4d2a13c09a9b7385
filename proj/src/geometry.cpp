#include "cosmos/geometry.hpp"

#include <limits>
#include <optional>

#include "cosmos/parse.hpp"
#include "cosmos/error.hpp"

namespace cosmos {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw Error(ErrorCode::ConstraintViolation, "geometry capacity overflows 64 bits");
  }
  return out;
}

}  // namespace

std::uint64_t ArrayGeometry::capacity_bits() const {
  std::uint64_t bits = checked_mul(bank_count, tile_rows_per_bank);
  bits = checked_mul(bits, tile_cols_per_bank);
  bits = checked_mul(bits, cells_per_tile_side);
  bits = checked_mul(bits, cells_per_tile_side);
  return checked_mul(bits, bits_per_cell);
}

std::uint64_t ArrayGeometry::line_count() const {
  return static_cast<std::uint64_t>(bank_groups()) * tile_rows_per_bank * tile_cols_per_bank *
         cells_per_tile_side;
}

std::uint64_t ArrayGeometry::cell_count() const {
  return static_cast<std::uint64_t>(bank_count) * tile_rows_per_bank * tile_cols_per_bank *
         cells_per_tile_side * cells_per_tile_side;
}

void check_geometry(const ArrayGeometry& g) {
  const std::pair<const char*, std::uint32_t> dims[] = {
      {"bits_per_cell", g.bits_per_cell},
      {"cells_per_tile_side", g.cells_per_tile_side},
      {"tile_rows_per_bank", g.tile_rows_per_bank},
      {"tile_cols_per_bank", g.tile_cols_per_bank},
      {"bank_count", g.bank_count},
      {"banks_per_cacheline", g.banks_per_cacheline},
      {"cacheline_bytes", g.cacheline_bytes},
  };
  for (const auto& [name, value] : dims) {
    if (value == 0) {
      throw Error(ErrorCode::NonPositiveDimension, std::string(name) + " must be > 0");
    }
  }
  if (g.bits_per_cell > 8) {
    throw Error(ErrorCode::ConstraintViolation, "bits_per_cell must be in 1..8");
  }
  const std::uint64_t line_bits = static_cast<std::uint64_t>(g.cacheline_bytes) * 8;
  const std::uint64_t spread =
      static_cast<std::uint64_t>(g.banks_per_cacheline) * g.cells_per_tile_side * g.bits_per_cell;
  if (spread != line_bits) {
    throw Error(ErrorCode::ConstraintViolation,
                "banks_per_cacheline * cells_per_tile_side * bits_per_cell = " +
                    std::to_string(spread) + " but a cache line holds " +
                    std::to_string(line_bits) + " bits");
  }
  if (g.bank_count % g.banks_per_cacheline != 0) {
    throw Error(ErrorCode::ConstraintViolation,
                "bank_count must be a multiple of banks_per_cacheline");
  }
  (void)g.capacity_bits();  // overflow check
}

ArrayGeometry validate_geometry(const std::map<std::string, std::string>& raw) {
  ArrayGeometry g;
  std::optional<std::uint64_t> declared;
  for (const auto& [key, value] : raw) {
    auto dim = [&]() -> std::uint32_t {
      const auto v = parse_int(value, key);
      if (v <= 0) throw Error(ErrorCode::NonPositiveDimension, key + " must be > 0");
      if (v > std::numeric_limits<std::uint32_t>::max()) {
        throw Error(ErrorCode::ConstraintViolation, key + " is too large");
      }
      return static_cast<std::uint32_t>(v);
    };
    if (key == "bits_per_cell") g.bits_per_cell = dim();
    else if (key == "cells_per_tile_side") g.cells_per_tile_side = dim();
    else if (key == "tile_rows_per_bank") g.tile_rows_per_bank = dim();
    else if (key == "tile_cols_per_bank") g.tile_cols_per_bank = dim();
    else if (key == "bank_count") g.bank_count = dim();
    else if (key == "banks_per_cacheline") g.banks_per_cacheline = dim();
    else if (key == "cacheline_bytes") g.cacheline_bytes = dim();
    else if (key == "capacity_bytes") declared = parse_size(value);
    else throw Error(ErrorCode::ConfigError, "unknown geometry key '" + key + "'");
  }
  check_geometry(g);
  if (declared && *declared != g.capacity_bytes()) {
    throw Error(ErrorCode::CapacityMismatch,
                "declared " + std::to_string(*declared) + " bytes, geometry holds " +
                    std::to_string(g.capacity_bytes()));
  }
  return g;
}

DecodedAddress decode_address(std::uint64_t addr, const ArrayGeometry& g) {
  if (addr >= g.capacity_bytes()) {
    throw Error(ErrorCode::OutOfRange, "address " + std::to_string(addr) + " beyond capacity");
  }
  if (addr % g.cacheline_bytes != 0) {
    throw Error(ErrorCode::Misaligned,
                "address " + std::to_string(addr) + " is not cache-line aligned");
  }
  std::uint64_t rest = addr / g.cacheline_bytes;
  DecodedAddress d;
  d.bank_group = static_cast<std::uint32_t>(rest % g.bank_groups());
  rest /= g.bank_groups();
  d.cell_row = static_cast<std::uint32_t>(rest % g.cells_per_tile_side);
  rest /= g.cells_per_tile_side;
  d.tile_col = static_cast<std::uint32_t>(rest % g.tile_cols_per_bank);
  rest /= g.tile_cols_per_bank;
  d.tile_row = static_cast<std::uint32_t>(rest);
  return d;
}

std::uint64_t encode_address(const DecodedAddress& d, const ArrayGeometry& g) {
  if (d.bank_group >= g.bank_groups() || d.tile_row >= g.tile_rows_per_bank ||
      d.tile_col >= g.tile_cols_per_bank || d.cell_row >= g.cells_per_tile_side) {
    throw Error(ErrorCode::OutOfRange, "decoded address outside geometry bounds");
  }
  std::uint64_t line = d.tile_row;
  line = line * g.tile_cols_per_bank + d.tile_col;
  line = line * g.cells_per_tile_side + d.cell_row;
  line = line * g.bank_groups() + d.bank_group;
  return line * g.cacheline_bytes;
}

SignalSet signals_for_access(const DecodedAddress& d, const ArrayGeometry& g) {
  (void)encode_address(d, g);  // bounds check
  SignalSet s;
  const std::uint32_t n = g.cells_per_tile_side;
  s.row_wavelength_index = d.cell_row + 1;
  s.column_wavelength_indices.reserve(n);
  for (std::uint32_t i = n + 1; i <= 2 * n; ++i) s.column_wavelength_indices.push_back(i);
  s.mode_indices.reserve(g.banks_per_cacheline);
  for (std::uint32_t k = 0; k < g.banks_per_cacheline; ++k) {
    s.mode_indices.push_back(bank_of_chunk(d.bank_group, k, g) + 1);
  }
  return s;
}

}  // namespace cosmos
