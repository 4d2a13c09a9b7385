#include "cosmos/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <sstream>

#include "cosmos/error.hpp"
#include "cosmos/parse.hpp"

namespace cosmos {

namespace {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

struct KeyDef {
  ConfigKey info;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <class Access>
KeyDef real(std::string section, std::string key, std::string unit, std::string help, Access a) {
  return {{std::move(section), std::move(key), std::move(unit), std::move(help)},
          [a, key](RunConfig& c, std::string_view v) { a(c) = parse_double(v, key); },
          [a](const RunConfig& c) { return format_double(a(const_cast<RunConfig&>(c))); }};
}

template <class Access>
KeyDef count(std::string section, std::string key, std::string unit, std::string help, Access a) {
  return {{std::move(section), std::move(key), std::move(unit), std::move(help)},
          [a, key](RunConfig& c, std::string_view v) {
            const std::int64_t n = parse_int(v, key);
            using T = std::remove_reference_t<decltype(a(c))>;
            if (n < 0 || static_cast<std::uint64_t>(n) > std::numeric_limits<T>::max()) {
              throw Error(ErrorCode::ConfigError, key + " out of range: " + std::string(v));
            }
            a(c) = static_cast<T>(n);
          },
          [a](const RunConfig& c) { return std::to_string(a(const_cast<RunConfig&>(c))); }};
}

template <class Access>
KeyDef text(std::string section, std::string key, std::string unit, std::string help, Access a) {
  return {{std::move(section), std::move(key), std::move(unit), std::move(help)},
          [a](RunConfig& c, std::string_view v) { a(c) = std::string(v); },
          [a](const RunConfig& c) { return a(const_cast<RunConfig&>(c)); }};
}

template <class Access>
KeyDef optional_count(std::string section, std::string key, std::string unit, std::string help,
                      Access a) {
  return {{std::move(section), std::move(key), std::move(unit), std::move(help)},
          [a, key](RunConfig& c, std::string_view v) {
            if (v == "none") {
              a(c).reset();
              return;
            }
            const std::int64_t n = parse_int(v, key);
            if (n <= 0) throw Error(ErrorCode::ConfigError, key + " must be > 0");
            a(c) = static_cast<std::uint64_t>(n);
          },
          [a](const RunConfig& c) {
            const auto& o = a(const_cast<RunConfig&>(c));
            return o ? std::to_string(*o) : std::string("none");
          }};
}

const std::vector<KeyDef>& registry() {
  static const std::vector<KeyDef> keys = [] {
    std::vector<KeyDef> k;
    // run
    k.push_back(text("run", "name", "", "report name; also the merge key for batch runs",
                     [](RunConfig& c) -> std::string& { return c.sim.name; }));
    k.push_back({{"run", "preset", "", "base preset applied before all other keys"},
                 [](RunConfig&, std::string_view) {},
                 [](const RunConfig& c) { return c.preset; }});
    k.push_back({{"run", "backend", "", "cosmos | epcm | fixed-dram"},
                 [](RunConfig& c, std::string_view v) { c.sim.backend = parse_backend_kind(v); },
                 [](const RunConfig& c) { return std::string(to_string(c.sim.backend)); }});
    k.push_back(text("run", "trace", "path", "trace file used when --trace is not given",
                     [](RunConfig& c) -> std::string& { return c.trace_path; }));
    k.push_back(count("run", "payload_seed", "", "seed for writes that carry no data",
                      [](RunConfig& c) -> std::uint64_t& { return c.payload_seed; }));
    k.push_back({{"run", "keep_read_data", "bool", "retain returned read data in records"},
                 [](RunConfig& c, std::string_view v) {
                   c.sim.keep_read_data = parse_bool(v, "keep_read_data");
                 },
                 [](const RunConfig& c) { return std::string(c.sim.keep_read_data ? "true" : "false"); }});

    // geometry
    k.push_back(count("geometry", "bits_per_cell", "bits", "b_cell, bits stored per cell",
                      [](RunConfig& c) -> std::uint32_t& { return c.sim.geometry.bits_per_cell; }));
    k.push_back(count("geometry", "cells_per_tile_side", "cells", "n, tile is n x n cells",
                      [](RunConfig& c) -> std::uint32_t& { return c.sim.geometry.cells_per_tile_side; }));
    k.push_back(count("geometry", "tile_rows_per_bank", "tiles", "m_r, tile rows per bank",
                      [](RunConfig& c) -> std::uint32_t& { return c.sim.geometry.tile_rows_per_bank; }));
    k.push_back(count("geometry", "tile_cols_per_bank", "tiles", "m_c, tile columns per bank",
                      [](RunConfig& c) -> std::uint32_t& { return c.sim.geometry.tile_cols_per_bank; }));
    k.push_back(count("geometry", "bank_count", "banks", "p, banks in the array",
                      [](RunConfig& c) -> std::uint32_t& { return c.sim.geometry.bank_count; }));
    k.push_back(count("geometry", "banks_per_cacheline", "banks", "g, banks sharing one line",
                      [](RunConfig& c) -> std::uint32_t& { return c.sim.geometry.banks_per_cacheline; }));
    k.push_back(count("geometry", "cacheline_bytes", "bytes", "cache line size",
                      [](RunConfig& c) -> std::uint32_t& { return c.sim.geometry.cacheline_bytes; }));
    k.push_back({{"geometry", "capacity_bytes", "bytes", "optional check against computed capacity (suffixes allowed)"},
                 [](RunConfig& c, std::string_view v) {
                   if (v == "none") c.expected_capacity_bytes.reset();
                   else c.expected_capacity_bytes = parse_size(v, "capacity_bytes");
                 },
                 [](const RunConfig& c) {
                   return c.expected_capacity_bytes ? std::to_string(*c.expected_capacity_bytes)
                                                    : std::string("none");
                 }});

    // timing
    k.push_back(real("timing", "t_set_ns", "ns", "SET pulse (write) duration",
                     [](RunConfig& c) -> double& { return c.sim.timing.t_set_ns; }));
    k.push_back(real("timing", "t_reset_ns", "ns", "RESET pulse duration",
                     [](RunConfig& c) -> double& { return c.sim.timing.t_reset_ns; }));
    k.push_back(real("timing", "t_read_ns", "ns", "read (sense, RESET, sense) duration",
                     [](RunConfig& c) -> double& { return c.sim.timing.t_read_ns; }));
    k.push_back(real("timing", "t_burst_ns", "ns", "burst transfer time",
                     [](RunConfig& c) -> double& { return c.sim.timing.t_burst_ns; }));
    k.push_back(real("timing", "t_eoe_ns", "ns", "E-O-E command mapping latency and issue interval",
                     [](RunConfig& c) -> double& { return c.sim.timing.t_eoe_ns; }));

    // caps
    k.push_back(count("caps", "write_window_bits", "bits", "bits admitted per write window",
                      [](RunConfig& c) -> std::uint64_t& { return c.sim.caps.write_window_bits; }));
    k.push_back(real("caps", "write_window_ns", "ns", "write window length",
                     [](RunConfig& c) -> double& { return c.sim.caps.write_window_ns; }));
    k.push_back(count("caps", "read_window_bits", "bits", "bits admitted per read window",
                      [](RunConfig& c) -> std::uint64_t& { return c.sim.caps.read_window_bits; }));
    k.push_back(real("caps", "read_window_ns", "ns", "read window length",
                     [](RunConfig& c) -> double& { return c.sim.caps.read_window_ns; }));
    k.push_back(optional_count("caps", "write_window_cells", "cells",
                               "write window in cells (overrides bits; 'none' to unset)",
                               [](RunConfig& c) -> std::optional<std::uint64_t>& { return c.write_window_cells; }));
    k.push_back(optional_count("caps", "read_window_cells", "cells",
                               "read window in cells (overrides bits; 'none' to unset)",
                               [](RunConfig& c) -> std::optional<std::uint64_t>& { return c.read_window_cells; }));

    // controller
    k.push_back(count("controller", "holding_capacity_lines", "lines", "holding buffer slots",
                      [](RunConfig& c) -> std::uint32_t& { return c.sim.controller.holding_capacity; }));
    k.push_back(count("controller", "queue_capacity_requests", "requests", "RAQ/CAQ depth",
                      [](RunConfig& c) -> std::uint32_t& { return c.sim.controller.queue_capacity; }));
    k.push_back(count("controller", "drain_reserve_lines", "lines",
                      "free-slot watermark that forces writebacks; 0 derives it from timing",
                      [](RunConfig& c) -> std::uint32_t& { return c.sim.controller.drain_reserve; }));
    k.push_back(real("controller", "read_noise", "fraction", "uniform relative read-intensity noise",
                     [](RunConfig& c) -> double& { return c.sim.controller.read_noise; }));
    k.push_back(count("controller", "noise_seed", "", "read-noise RNG seed",
                      [](RunConfig& c) -> std::uint64_t& { return c.sim.controller.noise_seed; }));

    // device
    k.push_back(real("device", "t_amorphous", "fraction", "transmission of a fully amorphous cell",
                     [](RunConfig& c) -> double& { return c.sim.transmission.t_amorphous; }));
    k.push_back(real("device", "t_crystalline", "fraction", "transmission of a fully crystalline cell",
                     [](RunConfig& c) -> double& { return c.sim.transmission.t_crystalline; }));
    k.push_back(real("device", "noise_tolerance", "fraction", "relative ratio slack accepted on decode",
                     [](RunConfig& c) -> double& { return c.sim.transmission.noise_tolerance; }));

    // epcm
    k.push_back(real("epcm", "t_set_ns", "ns", "EPCM SET time",
                     [](RunConfig& c) -> double& { return c.sim.epcm.t_set_ns; }));
    k.push_back(real("epcm", "t_reset_ns", "ns", "EPCM RESET time",
                     [](RunConfig& c) -> double& { return c.sim.epcm.t_reset_ns; }));
    k.push_back(real("epcm", "t_read_ns", "ns", "EPCM array read time",
                     [](RunConfig& c) -> double& { return c.sim.epcm.t_read_ns; }));
    k.push_back(real("epcm", "t_burst_ns", "ns", "EPCM time per bus burst",
                     [](RunConfig& c) -> double& { return c.sim.epcm.t_burst_ns; }));
    k.push_back(count("epcm", "bits_per_cell", "bits", "EPCM MLC bits",
                      [](RunConfig& c) -> std::uint32_t& { return c.sim.epcm.bits_per_cell; }));
    k.push_back(count("epcm", "bank_count", "banks", "EPCM banks",
                      [](RunConfig& c) -> std::uint32_t& { return c.sim.epcm.bank_count; }));
    k.push_back(count("epcm", "bus_width_bits", "bits", "EPCM data bus width",
                      [](RunConfig& c) -> std::uint32_t& { return c.sim.epcm.bus_width_bits; }));
    k.push_back(count("epcm", "burst_length", "beats", "EPCM beats per burst",
                      [](RunConfig& c) -> std::uint32_t& { return c.sim.epcm.burst_length; }));
    k.push_back(count("epcm", "row_bytes", "bytes", "EPCM row buffer size",
                      [](RunConfig& c) -> std::uint32_t& { return c.sim.epcm.row_bytes; }));
    k.push_back(real("epcm", "write_energy_pj_per_bit", "pJ/bit", "EPCM write energy",
                     [](RunConfig& c) -> double& { return c.sim.epcm.write_energy_pj_per_bit; }));
    k.push_back(real("epcm", "read_energy_pj_per_bit", "pJ/bit", "EPCM read energy",
                     [](RunConfig& c) -> double& { return c.sim.epcm.read_energy_pj_per_bit; }));

    // dram
    k.push_back(real("dram", "latency_ns", "ns", "fixed DRAM access latency",
                     [](RunConfig& c) -> double& { return c.sim.dram_latency_ns; }));

    // energy
    k.push_back(real("energy", "laser_power_per_signal_mw", "mW", "electrical laser power per signal",
                     [](RunConfig& c) -> double& { return c.sim.energy.laser_power_per_signal_mw; }));
    k.push_back(real("energy", "dac_power_mw", "mW", "current-DAC power per signal",
                     [](RunConfig& c) -> double& { return c.sim.energy.dac_power_mw; }));
    k.push_back(real("energy", "adc_power_mw", "mW", "ADC power per read signal",
                     [](RunConfig& c) -> double& { return c.sim.energy.adc_power_mw; }));
    k.push_back(real("energy", "wall_plug_efficiency", "fraction", "laser optical/electrical ratio",
                     [](RunConfig& c) -> double& { return c.sim.energy.wall_plug_efficiency; }));
    k.push_back(count("energy", "signals_per_bank_write", "signals", "signals per bank per write; 0 = n + 1",
                      [](RunConfig& c) -> std::uint32_t& { return c.sim.energy.signals_per_bank_write; }));
    k.push_back(count("energy", "signals_per_bank_read", "signals", "signals per bank per read",
                      [](RunConfig& c) -> std::uint32_t& { return c.sim.energy.signals_per_bank_read; }));
    k.push_back({{"energy", "read_power_per_bank_mw", "mW", "override of composed per-bank read power; 'none' to unset"},
                 [](RunConfig& c, std::string_view v) {
                   if (v == "none") c.sim.energy.read_power_per_bank_mw.reset();
                   else c.sim.energy.read_power_per_bank_mw = parse_double(v, "read_power_per_bank_mw");
                 },
                 [](const RunConfig& c) {
                   return c.sim.energy.read_power_per_bank_mw
                              ? format_double(*c.sim.energy.read_power_per_bank_mw)
                              : std::string("none");
                 }});
    k.push_back(count("energy", "laser_signal_count", "signals", "optical signals fed by the laser bank",
                      [](RunConfig& c) -> std::uint64_t& { return c.laser_signal_count; }));

    // area
    k.push_back(real("area", "gst_side_nm", "nm", "GST cell side",
                     [](RunConfig& c) -> double& { return c.area.gst_side_nm; }));
    k.push_back(real("area", "gst_separation_nm", "nm", "gap between adjacent cells",
                     [](RunConfig& c) -> double& { return c.area.gst_separation_nm; }));
    k.push_back(real("area", "mrr_diameter_um", "um", "microring diameter added per side",
                     [](RunConfig& c) -> double& { return c.area.mrr_diameter_um; }));
    k.push_back(count("area", "layers", "layers", "stacked layers; 0 = one per bank",
                      [](RunConfig& c) -> std::uint32_t& { return c.area.layers; }));
    k.push_back({{"area", "density_mode", "", "footprint | summed"},
                 [](RunConfig& c, std::string_view v) {
                   if (v == "footprint") c.area.density_mode = DensityMode::Footprint;
                   else if (v == "summed") c.area.density_mode = DensityMode::SummedLayers;
                   else throw Error(ErrorCode::ConfigError, "density_mode must be footprint or summed");
                 },
                 [](const RunConfig& c) {
                   return std::string(c.area.density_mode == DensityMode::Footprint ? "footprint"
                                                                                    : "summed");
                 }});

    // lifetime
    k.push_back(real("lifetime", "size_bytes", "bytes", "memory size S",
                     [](RunConfig& c) -> double& { return c.lifetime.size_bytes; }));
    k.push_back(real("lifetime", "max_writes_per_cell", "writes", "endurance W_m",
                     [](RunConfig& c) -> double& { return c.lifetime.max_writes_per_cell; }));
    k.push_back(real("lifetime", "bytes_per_cycle", "bytes/cycle", "read+write traffic B",
                     [](RunConfig& c) -> double& { return c.lifetime.bytes_per_cycle; }));
    k.push_back(real("lifetime", "frequency_hz", "Hz", "core clock F",
                     [](RunConfig& c) -> double& { return c.lifetime.frequency_hz; }));

    // published
    auto pub = [&k](std::string key, std::string unit, std::string help, double PublishedValues::*m) {
      k.push_back(real("published", std::move(key), std::move(unit), std::move(help),
                       [m](RunConfig& c) -> double& { return c.published.*m; }));
    };
    pub("read_latency_ns", "ns", "isolated read latency", &PublishedValues::read_latency_ns);
    pub("write_latency_ns", "ns", "isolated write latency", &PublishedValues::write_latency_ns);
    pub("peak_throughput_gbs", "GB/s", "saturated read or write throughput", &PublishedValues::peak_throughput_gbs);
    pub("read_energy_pj_per_bit", "pJ/bit", "read energy per bit", &PublishedValues::read_energy_pj_per_bit);
    pub("write_energy_pj_per_bit", "pJ/bit", "write energy per bit", &PublishedValues::write_energy_pj_per_bit);
    pub("write_power_mw", "mW", "write power intermediate", &PublishedValues::write_power_mw);
    pub("write_energy_intermediate_pj_per_bit", "pJ/bit", "energy implied by the write power intermediate",
        &PublishedValues::write_energy_intermediate_pj_per_bit);
    pub("laser_power_dbm", "dBm", "optical power per signal", &PublishedValues::laser_power_dbm);
    pub("laser_power_mw", "mW", "optical power per signal", &PublishedValues::laser_power_mw);
    pub("laser_electrical_mw", "mW", "electrical power per signal", &PublishedValues::laser_electrical_mw);
    pub("total_laser_power_w", "W", "total laser electrical power", &PublishedValues::total_laser_power_w);
    pub("lifetime_years", "years", "worked lifetime example", &PublishedValues::lifetime_years);
    pub("area_4bit_mm2", "mm^2", "4-bit array area", &PublishedValues::area_4bit_mm2);
    pub("area_8bit_mm2", "mm^2", "8-bit array area", &PublishedValues::area_8bit_mm2);

    // tolerance
    auto tol = [&k](std::string key, std::string unit, std::string help, double Tolerances::*m) {
      k.push_back(real("tolerance", std::move(key), std::move(unit), std::move(help),
                       [m](RunConfig& c) -> double& { return c.tolerance.*m; }));
    };
    tol("latency_abs_ns", "ns", "allowed isolated-latency deviation", &Tolerances::latency_abs_ns);
    tol("throughput_rel", "fraction", "allowed peak-throughput deviation", &Tolerances::throughput_rel);
    tol("read_energy_rel", "fraction", "allowed read energy deviation", &Tolerances::read_energy_rel);
    tol("write_energy_rel", "fraction", "allowed write energy deviation", &Tolerances::write_energy_rel);
    tol("laser_power_rel", "fraction", "allowed laser power deviation", &Tolerances::laser_power_rel);
    tol("budget_db_abs", "dB", "allowed budget bottom-line deviation", &Tolerances::budget_db_abs);
    tol("lifetime_rel", "fraction", "allowed lifetime deviation", &Tolerances::lifetime_rel);
    tol("area_rel", "fraction", "allowed area deviation", &Tolerances::area_rel);

    // output
    k.push_back(text("output", "json", "path", "JSON report path (empty = none)",
                     [](RunConfig& c) -> std::string& { return c.output.json; }));
    k.push_back(text("output", "text", "path", "text report path (empty = none)",
                     [](RunConfig& c) -> std::string& { return c.output.text; }));
    k.push_back(text("output", "records_csv", "path", "per-request CSV path (empty = none)",
                     [](RunConfig& c) -> std::string& { return c.output.records_csv; }));
    return k;
  }();
  return keys;
}

const KeyDef* find_key(std::string_view section, std::string_view key) {
  for (const auto& k : registry()) {
    if (k.info.section == section && k.info.key == key) return &k;
  }
  return nullptr;
}

bool known_section(std::string_view section) {
  for (const auto& k : registry()) {
    if (k.info.section == section) return true;
  }
  return false;
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"cosmos-4bit", "cosmos-2bit", "cosmos-8bit",
                                              "epcm-2bit", "fixed-dram"};
  return names;
}

RunConfig preset_config(std::string_view name) {
  RunConfig c;
  c.preset = std::string(name);
  c.sim.name = std::string(name);
  auto& g = c.sim.geometry;
  if (name == "cosmos-4bit" || name == "epcm-2bit" || name == "fixed-dram") {
    // defaults already describe the 4-bit, 2 GiB array
  } else if (name == "cosmos-2bit") {
    g.bits_per_cell = 2;
    g.banks_per_cacheline = 8;
    g.tile_rows_per_bank = 1024;
    g.tile_cols_per_bank = 1024;
  } else if (name == "cosmos-8bit") {
    g.bits_per_cell = 8;
    g.banks_per_cacheline = 2;
    g.tile_rows_per_bank = 512;
    g.tile_cols_per_bank = 512;
  } else {
    throw Error(ErrorCode::ConfigError, "unknown preset '" + std::string(name) + "'");
  }
  if (name == "epcm-2bit") c.sim.backend = BackendKind::Epcm;
  if (name == "fixed-dram") c.sim.backend = BackendKind::FixedDram;
  // Windows are fixed in cells across MLC variants: 256 cells per write
  // window, 40 cells per read window.
  c.write_window_cells = 256;
  c.read_window_cells = 40;
  finalize_run_config(c);
  return c;
}

void finalize_run_config(RunConfig& c) {
  auto& s = c.sim;
  check_geometry(s.geometry);
  if (c.expected_capacity_bytes && *c.expected_capacity_bytes != s.geometry.capacity_bytes()) {
    throw Error(ErrorCode::CapacityMismatch,
                "geometry gives " + std::to_string(s.geometry.capacity_bytes()) +
                    " bytes, capacity_bytes says " + std::to_string(*c.expected_capacity_bytes));
  }
  if (c.write_window_cells) s.caps.write_window_bits = *c.write_window_cells * s.geometry.bits_per_cell;
  if (c.read_window_cells) s.caps.read_window_bits = *c.read_window_cells * s.geometry.bits_per_cell;
  s.transmission.bits_per_cell = s.geometry.bits_per_cell;
  s.max_writes_per_cell = c.lifetime.max_writes_per_cell;
  s.lifetime_frequency_hz = c.lifetime.frequency_hz;
  if (c.laser_signal_count == 0) throw Error(ErrorCode::ConfigError, "laser_signal_count must be > 0");
  check_area_params(c.area);
  check_sim_config(s);
}

namespace {

struct Setting {
  std::string section;
  std::string key;
  std::string value;
  std::size_t line;
};

}  // namespace

RunConfig parse_run_config(std::istream& in) {
  std::vector<Setting> settings;
  std::string raw;
  std::string section;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(lineno, "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!known_section(section)) throw ParseError(lineno, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(lineno, "expected key = value");
    if (section.empty()) throw ParseError(lineno, "key outside of any [section]");
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (!find_key(section, key)) {
      throw ParseError(lineno, "unknown key '" + key + "' in [" + section + "]");
    }
    settings.push_back({section, std::move(key), std::move(value), lineno});
  }

  std::string preset = "cosmos-4bit";
  std::size_t preset_line = 0;
  for (const auto& s : settings) {
    if (s.section == "run" && s.key == "preset") {
      preset = s.value;
      preset_line = s.line;
    }
  }
  RunConfig cfg;
  try {
    cfg = preset_config(preset);
  } catch (const Error& e) {
    throw ParseError(preset_line, e.what());
  }
  bool named = false;
  for (const auto& s : settings) {
    if (s.section == "run" && s.key == "preset") continue;
    if (s.section == "run" && s.key == "name") named = true;
    // Explicit bit windows replace the preset's cell-based ones.
    if (s.section == "caps" && s.key == "write_window_bits") cfg.write_window_cells.reset();
    if (s.section == "caps" && s.key == "read_window_bits") cfg.read_window_cells.reset();
    try {
      find_key(s.section, s.key)->set(cfg, s.value);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(s.line, e.what());
    }
  }
  if (!named) cfg.sim.name = preset;
  finalize_run_config(cfg);
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open config '" + path + "'");
  return parse_run_config(in);
}

void apply_setting(RunConfig& config, std::string_view dotted, std::string_view value) {
  const auto dot = dotted.find('.');
  if (dot == std::string_view::npos) {
    throw Error(ErrorCode::ConfigError, "setting must look like section.key=value");
  }
  const auto section = dotted.substr(0, dot);
  const auto key = dotted.substr(dot + 1);
  const KeyDef* def = find_key(section, key);
  if (!def) throw Error(ErrorCode::ConfigError, "unknown key '" + std::string(dotted) + "'");
  if (section == "run" && key == "preset") {
    throw Error(ErrorCode::ConfigError, "the preset can only be chosen in a config file or --preset");
  }
  if (section == "caps" && key == "write_window_bits") config.write_window_cells.reset();
  if (section == "caps" && key == "read_window_bits") config.read_window_cells.reset();
  def->set(config, trim(value));
  finalize_run_config(config);
}

std::string dump_run_config(const RunConfig& c) {
  std::ostringstream os;
  std::string section;
  for (const auto& k : registry()) {
    if (k.info.section != section) {
      if (!section.empty()) os << '\n';
      section = k.info.section;
      os << '[' << section << "]\n";
    }
    // Cell windows, when set, take precedence; skip the derived bit value.
    if (k.info.section == "caps" &&
        ((k.info.key == "write_window_bits" && c.write_window_cells) ||
         (k.info.key == "read_window_bits" && c.read_window_cells))) {
      continue;
    }
    os << k.info.key << " = " << k.get(c) << '\n';
  }
  return os.str();
}

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> out;
    for (const auto& k : registry()) out.push_back(k.info);
    return out;
  }();
  return keys;
}

std::string config_help() {
  std::ostringstream os;
  os << "Config keys (sectioned key = value; '#' starts a comment):\n";
  for (const auto& k : config_keys()) {
    std::string name = "[" + k.section + "] " + k.key;
    if (!k.unit.empty()) name += " (" + k.unit + ")";
    os << "  " << name;
    if (name.size() < 46) os << std::string(46 - name.size(), ' ');
    else os << ' ';
    os << k.description << '\n';
  }
  os << "Presets:";
  for (const auto& p : preset_names()) os << ' ' << p;
  os << '\n';
  return os.str();
}

}  // namespace cosmos
