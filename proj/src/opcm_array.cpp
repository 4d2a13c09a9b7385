#include "cosmos/opcm_array.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "cosmos/error.hpp"

namespace cosmos {

std::vector<std::uint8_t> levels_from_line(std::span<const std::uint8_t> line,
                                           const ArrayGeometry& geom) {
  if (line.size() != geom.cacheline_bytes) {
    throw Error(ErrorCode::OutOfRange, "line payload has " + std::to_string(line.size()) +
                                           " bytes, expected " +
                                           std::to_string(geom.cacheline_bytes));
  }
  const std::uint32_t b = geom.bits_per_cell;
  std::vector<std::uint8_t> levels(geom.cells_per_line(), 0);
  for (std::uint32_t c = 0; c < levels.size(); ++c) {
    std::uint32_t v = 0;
    for (std::uint32_t i = 0; i < b; ++i) {
      const std::uint32_t bit = c * b + i;
      v |= ((line[bit / 8] >> (bit % 8)) & 1u) << i;
    }
    levels[c] = static_cast<std::uint8_t>(v);
  }
  return levels;
}

CacheLine line_from_levels(std::span<const std::uint8_t> levels, const ArrayGeometry& geom) {
  if (levels.size() != geom.cells_per_line()) {
    throw Error(ErrorCode::OutOfRange, "level vector does not cover one cache line");
  }
  const std::uint32_t b = geom.bits_per_cell;
  CacheLine line(geom.cacheline_bytes, 0);
  for (std::uint32_t c = 0; c < levels.size(); ++c) {
    for (std::uint32_t i = 0; i < b; ++i) {
      const std::uint32_t bit = c * b + i;
      if ((levels[c] >> i) & 1u) line[bit / 8] |= static_cast<std::uint8_t>(1u << (bit % 8));
    }
  }
  return line;
}

OpcmArray::OpcmArray(ArrayGeometry geom, TransmissionModel model)
    : geom_(geom), model_(model) {
  check_geometry(geom_);
  model_.bits_per_cell = geom_.bits_per_cell;
  check_transmission_model(model_);
  level_transmission_.resize(geom_.levels());
  for (std::uint32_t l = 0; l < geom_.levels(); ++l) {
    level_transmission_[l] = transmission(l, model_);
  }
}

std::uint64_t OpcmArray::tile_key(std::uint32_t bank, std::uint32_t tile_row,
                                  std::uint32_t tile_col) const {
  return (static_cast<std::uint64_t>(bank) * geom_.tile_rows_per_bank + tile_row) *
             geom_.tile_cols_per_bank +
         tile_col;
}

OpcmArray::Tile& OpcmArray::tile(std::uint64_t key) {
  auto& t = tiles_[key];
  if (t.rows.empty()) t.rows.resize(geom_.cells_per_tile_side);
  return t;
}

const OpcmArray::Tile* OpcmArray::find_tile(std::uint64_t key) const {
  const auto it = tiles_.find(key);
  return it == tiles_.end() ? nullptr : &it->second;
}

void OpcmArray::write_line(const DecodedAddress& where, std::span<const std::uint8_t> data) {
  (void)encode_address(where, geom_);
  const auto levels = levels_from_line(data, geom_);
  const std::uint32_t n = geom_.cells_per_tile_side;
  for (std::uint32_t k = 0; k < geom_.banks_per_cacheline; ++k) {
    auto& t = tile(tile_key(bank_of_chunk(where.bank_group, k, geom_), where.tile_row,
                            where.tile_col));
    auto& row = t.rows[where.cell_row];
    if (row.empty()) row.resize(n);
    for (std::uint32_t j = 0; j < n; ++j) row[j] = apply_write(row[j], levels[k * n + j]);
    total_cell_writes_ += n;
  }
}

ReadTranscript OpcmArray::read_line(const DecodedAddress& where, double noise_amplitude,
                                    std::mt19937_64* rng) {
  (void)encode_address(where, geom_);
  const std::uint32_t n = geom_.cells_per_tile_side;
  const std::uint32_t columns = geom_.cells_per_line();
  std::uniform_real_distribution<double> jitter(-noise_amplitude, noise_amplitude);
  auto sense = [&](double ideal) {
    if (noise_amplitude > 0.0 && rng != nullptr) return ideal * (1.0 + jitter(*rng));
    return ideal;
  };

  ReadTranscript rt;
  rt.first_intensity.resize(columns);
  rt.second_intensity.resize(columns);
  rt.levels.resize(columns);

  TransmissionModel decode_model = model_;
  if (noise_amplitude > 0.0) {
    // Worst-case ratio inflation of two independently perturbed readings.
    decode_model.noise_tolerance =
        std::max(model_.noise_tolerance, (1.0 + noise_amplitude) / (1.0 - noise_amplitude) - 1.0);
  }

  for (std::uint32_t k = 0; k < geom_.banks_per_cacheline; ++k) {
    auto& t = tile(tile_key(bank_of_chunk(where.bank_group, k, geom_), where.tile_row,
                            where.tile_col));
    auto column_product = [&](std::uint32_t col) {
      double p = 1.0;
      for (const auto& row : t.rows) {
        if (!row.empty()) p *= level_transmission_[row[col].level];
      }
      return p;
    };
    for (std::uint32_t j = 0; j < n; ++j) rt.first_intensity[k * n + j] = sense(column_product(j));
    // RESET of the target row: every cell is amorphised and worn once.
    auto& row = t.rows[where.cell_row];
    if (row.empty()) row.resize(n);
    for (auto& c : row) c = apply_write(c, 0);
    total_cell_writes_ += n;
    for (std::uint32_t j = 0; j < n; ++j) {
      rt.second_intensity[k * n + j] = sense(column_product(j));
    }
  }

  // Photodetector output is taken as 1 V per unit of injected intensity.
  rt.first_voltage = rt.first_intensity;
  rt.second_voltage = rt.second_intensity;
  for (std::uint32_t i = 0; i < columns; ++i) {
    const double ratio = rt.first_intensity[i] / rt.second_intensity[i];
    rt.levels[i] = static_cast<std::uint8_t>(level_from_transmission_ratio(ratio, decode_model));
  }
  rt.data = line_from_levels(rt.levels, geom_);
  return rt;
}

CacheLine OpcmArray::peek_line(const DecodedAddress& where) const {
  (void)encode_address(where, geom_);
  const std::uint32_t n = geom_.cells_per_tile_side;
  std::vector<std::uint8_t> levels(geom_.cells_per_line(), 0);
  for (std::uint32_t k = 0; k < geom_.banks_per_cacheline; ++k) {
    const Tile* t = find_tile(tile_key(bank_of_chunk(where.bank_group, k, geom_), where.tile_row,
                                       where.tile_col));
    if (t == nullptr || t->rows[where.cell_row].empty()) continue;
    for (std::uint32_t j = 0; j < n; ++j) levels[k * n + j] = t->rows[where.cell_row][j].level;
  }
  return line_from_levels(levels, geom_);
}

CellState OpcmArray::cell(std::uint32_t bank, std::uint32_t tile_row, std::uint32_t tile_col,
                          std::uint32_t cell_row, std::uint32_t cell_col) const {
  if (bank >= geom_.bank_count || tile_row >= geom_.tile_rows_per_bank ||
      tile_col >= geom_.tile_cols_per_bank || cell_row >= geom_.cells_per_tile_side ||
      cell_col >= geom_.cells_per_tile_side) {
    throw Error(ErrorCode::OutOfRange, "cell coordinate outside geometry");
  }
  const Tile* t = find_tile(tile_key(bank, tile_row, tile_col));
  if (t == nullptr || t->rows[cell_row].empty()) return {};
  return t->rows[cell_row][cell_col];
}

void OpcmArray::for_each_row(const RowVisitor& visit) const {
  std::vector<std::uint64_t> keys;
  keys.reserve(tiles_.size());
  for (const auto& [key, _] : tiles_) keys.push_back(key);
  std::sort(keys.begin(), keys.end());
  for (const auto key : keys) {
    const auto& t = tiles_.at(key);
    const auto tile_col = static_cast<std::uint32_t>(key % geom_.tile_cols_per_bank);
    const auto rest = key / geom_.tile_cols_per_bank;
    const auto tile_row = static_cast<std::uint32_t>(rest % geom_.tile_rows_per_bank);
    const auto bank = static_cast<std::uint32_t>(rest / geom_.tile_rows_per_bank);
    for (std::uint32_t r = 0; r < t.rows.size(); ++r) {
      if (!t.rows[r].empty()) visit(bank, tile_row, tile_col, r, t.rows[r]);
    }
  }
}

}  // namespace cosmos
