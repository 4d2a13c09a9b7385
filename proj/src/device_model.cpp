#include "cosmos/device_model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "cosmos/error.hpp"

namespace cosmos {

namespace {

void check_level(std::uint32_t level, std::uint32_t max_level) {
  if (level > max_level) {
    throw Error(ErrorCode::LevelOutOfRange,
                "level " + std::to_string(level) + " exceeds " + std::to_string(max_level));
  }
}

double lerp(double lo, double hi, double frac) { return lo + (hi - lo) * frac; }

}  // namespace

std::string_view to_string(PulseKind kind) {
  switch (kind) {
    case PulseKind::Reset: return "RESET";
    case PulseKind::Set: return "SET";
    case PulseKind::Partial: return "PARTIAL";
    case PulseKind::Read: return "READ";
  }
  return "?";
}

void check_transmission_model(const TransmissionModel& m) {
  if (!(m.t_crystalline > 0.0 && m.t_crystalline < m.t_amorphous && m.t_amorphous <= 1.0)) {
    throw Error(ErrorCode::ConfigError,
                "transmission endpoints must satisfy 0 < t_crystalline < t_amorphous <= 1");
  }
  if (m.bits_per_cell == 0 || m.bits_per_cell > 8) {
    throw Error(ErrorCode::ConfigError, "bits_per_cell must be in 1..8");
  }
  if (m.noise_tolerance < 0.0) throw Error(ErrorCode::ConfigError, "noise tolerance must be >= 0");
}

double transmission(std::uint32_t level, const TransmissionModel& m) {
  const auto max = m.max_level();
  check_level(level, max);
  return m.t_amorphous - (m.t_amorphous - m.t_crystalline) * level / max;
}

std::uint32_t level_from_transmission_ratio(double ratio, const TransmissionModel& m) {
  if (!(ratio > 0.0) || ratio > m.t_amorphous * (1.0 + m.noise_tolerance) + 1e-12) {
    throw Error(ErrorCode::RatioOutOfRange, "transmission ratio " + std::to_string(ratio));
  }
  // Levels are evenly spaced, so the nearest one is a rounded index.
  const double step = (m.t_amorphous - m.t_crystalline) / m.max_level();
  const double idx = std::round((m.t_amorphous - ratio) / step);
  if (idx <= 0.0) return 0;
  if (idx >= m.max_level()) return m.max_level();
  return static_cast<std::uint32_t>(idx);
}

double column_transmission(std::span<const CellState> cells, const TransmissionModel& m) {
  double product = 1.0;
  for (const auto& c : cells) product *= transmission(c.level, m);
  return product;
}

CellState apply_write(CellState cell, std::uint32_t target_level) {
  if (target_level > std::numeric_limits<std::uint8_t>::max()) {
    throw Error(ErrorCode::LevelOutOfRange, "level " + std::to_string(target_level));
  }
  cell.level = static_cast<std::uint8_t>(target_level);
  ++cell.write_count;
  return cell;
}

void check_pulse_table(const PulseTable& t) {
  for (const PulseSpec* p : {&t.reset, &t.set, &t.read}) {
    if (!(p->energy_pj > 0.0 && p->duration_ns > 0.0)) {
      throw Error(ErrorCode::ConfigError, "pulse energy and duration must be > 0");
    }
  }
  if (t.read.duration_ns > 1.0) {
    throw Error(ErrorCode::ConfigError, "read pulse must be sub-ns (<= 1 ns)");
  }
  if (!(t.partial_energy_min_pj > 0.0 && t.partial_energy_max_pj >= t.partial_energy_min_pj &&
        t.partial_duration_min_ns > 0.0 &&
        t.partial_duration_max_ns >= t.partial_duration_min_ns)) {
    throw Error(ErrorCode::ConfigError, "partial pulse ranges must be positive and ordered");
  }
}

PulseSpec write_pulse_for_level(std::uint32_t level, std::uint32_t bits_per_cell,
                                const PulseTable& t) {
  if (bits_per_cell == 0 || bits_per_cell > 8) {
    throw Error(ErrorCode::ConfigError, "bits_per_cell must be in 1..8");
  }
  const std::uint32_t max = (1u << bits_per_cell) - 1;
  check_level(level, max);
  if (level == 0) return t.reset;
  if (level == max) return t.set;
  // max >= 2 here, so levels 1..max span a non-empty range.
  const double frac = static_cast<double>(level - 1) / static_cast<double>(max - 1);
  return {lerp(t.partial_energy_min_pj, t.partial_energy_max_pj, frac),
          lerp(t.partial_duration_min_ns, t.partial_duration_max_ns, frac), PulseKind::Partial};
}

void check_epcm_params(const EpcmParams& p) {
  if (!(p.t_set_ns > 0 && p.t_reset_ns > 0 && p.t_read_ns > 0 && p.t_burst_ns > 0)) {
    throw Error(ErrorCode::ConfigError, "EPCM timings must be > 0");
  }
  if (p.bits_per_cell == 0 || p.bank_count == 0 || p.bus_width_bits == 0 ||
      p.burst_length == 0 || p.row_bytes == 0) {
    throw Error(ErrorCode::ConfigError, "EPCM dimensions must be > 0");
  }
  if (!(p.write_energy_pj_per_bit > 0 && p.read_energy_pj_per_bit > 0)) {
    throw Error(ErrorCode::ConfigError, "EPCM energies must be > 0");
  }
}

}  // namespace cosmos
