#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cosmos/endurance.hpp"
#include "cosmos/optics_analysis.hpp"
#include "cosmos/simulator.hpp"

namespace cosmos {

// Figures printed in the paper, kept apart from anything computed so that
// reports can show both side by side.
struct PublishedValues {
  double read_latency_ns = 30.0;
  double write_latency_ns = 165.0;
  double peak_throughput_gbs = 0.8;
  double read_energy_pj_per_bit = 11.6;
  double write_energy_pj_per_bit = 40.68;
  double write_power_mw = 334.8;
  double write_energy_intermediate_pj_per_bit = 52.3;
  double laser_power_dbm = -7.22;
  double laser_power_mw = 0.19;
  double laser_electrical_mw = 0.95;
  double total_laser_power_w = 16.38;
  double lifetime_years = 0.064;
  double area_4bit_mm2 = 268.43;
  double area_8bit_mm2 = 67.1;
};

struct Tolerances {
  double latency_abs_ns = 0.0;
  double throughput_rel = 0.05;
  double read_energy_rel = 0.005;
  double write_energy_rel = 0.30;
  double laser_power_rel = 0.005;
  double budget_db_abs = 0.05;
  double lifetime_rel = 0.005;
  double area_rel = 0.05;
};

struct OutputPaths {
  std::string json;
  std::string text;
  std::string records_csv;
};

struct RunConfig {
  std::string preset = "cosmos-4bit";
  SimConfig sim;
  std::string trace_path;
  std::uint64_t payload_seed = 0;
  // Window sizes given in cells; converted to bits with the final geometry.
  std::optional<std::uint64_t> write_window_cells;
  std::optional<std::uint64_t> read_window_cells;
  std::optional<std::uint64_t> expected_capacity_bytes;
  std::uint64_t laser_signal_count = 17242;
  AreaModelParams area;
  LifetimeParams lifetime;
  PublishedValues published;
  Tolerances tolerance;
  OutputPaths output;
};

/// cosmos-4bit, cosmos-2bit, cosmos-8bit, epcm-2bit, fixed-dram.
RunConfig preset_config(std::string_view name);
const std::vector<std::string>& preset_names();

/// Sectioned key=value text. `[run] preset` is applied first regardless of
/// its position; unknown sections or keys throw ParseError with the line.
RunConfig parse_run_config(std::istream& in);
RunConfig load_run_config(const std::string& path);

/// Applies one `section.key=value` override, then re-validates.
void apply_setting(RunConfig& config, std::string_view dotted_key, std::string_view value);

/// Resolves derived fields (cell windows, device bits, lifetime) and validates.
void finalize_run_config(RunConfig& config);

/// Writes every key in canonical order; parse_run_config reads it back unchanged.
std::string dump_run_config(const RunConfig& config);

struct ConfigKey {
  std::string section;
  std::string key;
  std::string unit;
  std::string description;
};

const std::vector<ConfigKey>& config_keys();

/// One line per key: `[section] key (unit)  description`.
std::string config_help();

}  // namespace cosmos
