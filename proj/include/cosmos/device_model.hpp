#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace cosmos {

struct CellState {
  std::uint8_t level = 0;  // 0 = amorphous, max = crystalline
  std::uint32_t write_count = 0;

  friend bool operator==(const CellState&, const CellState&) = default;
};

/// Level-to-transmission map: linear between the amorphous and crystalline
/// endpoints.
struct TransmissionModel {
  double t_amorphous = 1.00;
  double t_crystalline = 0.21;
  std::uint32_t bits_per_cell = 4;
  // Relative tolerance accepted above t_amorphous when decoding noisy ratios.
  double noise_tolerance = 0.0;

  std::uint32_t max_level() const { return (1u << bits_per_cell) - 1; }
};

void check_transmission_model(const TransmissionModel& model);

double transmission(std::uint32_t level, const TransmissionModel& model);

/// Nearest level to a first-pass/post-RESET intensity ratio.
std::uint32_t level_from_transmission_ratio(double ratio, const TransmissionModel& model);

/// Product of per-cell transmissions along one column.
double column_transmission(std::span<const CellState> cells, const TransmissionModel& model);

CellState apply_write(CellState cell, std::uint32_t target_level);

enum class PulseKind { Reset, Set, Partial, Read };

std::string_view to_string(PulseKind kind);

struct PulseSpec {
  double energy_pj = 0.0;
  double duration_ns = 0.0;
  PulseKind kind = PulseKind::Read;

  friend bool operator==(const PulseSpec&, const PulseSpec&) = default;
};

/// Programming pulse parameters for the optical cell.
struct PulseTable {
  PulseSpec reset{180.0, 25.0, PulseKind::Reset};
  PulseSpec set{130.0, 250.0, PulseKind::Set};
  double partial_energy_min_pj = 60.0;
  double partial_energy_max_pj = 130.0;
  double partial_duration_min_ns = 50.0;
  double partial_duration_max_ns = 250.0;
  // Sub-ns readout pulse; its energy is not characterised, the default is a placeholder.
  PulseSpec read{1.0, 0.5, PulseKind::Read};
};

void check_pulse_table(const PulseTable& table);

/// Level 0 is a RESET, the top level a SET; levels in between are partial
/// crystallisation pulses interpolated linearly over levels 1..max.
PulseSpec write_pulse_for_level(std::uint32_t level, std::uint32_t bits_per_cell,
                                const PulseTable& table = {});

/// Electrically-controlled PCM baseline cell and channel parameters.
struct EpcmParams {
  double t_set_ns = 120.0;
  double t_reset_ns = 50.0;
  double t_read_ns = 60.0;
  double t_burst_ns = 4.0;
  std::uint32_t bits_per_cell = 2;
  std::uint32_t bank_count = 4;
  std::uint32_t bus_width_bits = 64;
  std::uint32_t burst_length = 4;
  std::uint32_t row_bytes = 1024;
  double write_energy_pj_per_bit = 243.0;
  double read_energy_pj_per_bit = 44.5;
};

void check_epcm_params(const EpcmParams& params);

}  // namespace cosmos
