#include "cosmos/optics_analysis.hpp"

#include <cmath>
#include <istream>
#include <string>

#include "cosmos/error.hpp"
#include "cosmos/parse.hpp"

namespace cosmos {

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

double mw_to_dbm(double mw) {
  if (!(mw > 0.0)) {
    throw Error(ErrorCode::NonPositivePower, "power " + std::to_string(mw) + " mW");
  }
  return 10.0 * std::log10(mw);
}

Deviation deviation(double computed, double published) {
  Deviation d;
  d.computed = computed;
  d.published = published;
  d.absolute = computed - published;
  d.relative = published != 0.0 ? d.absolute / std::abs(published) : 0.0;
  return d;
}

std::string_view to_string(BudgetKind kind) {
  switch (kind) {
    case BudgetKind::Loss: return "loss_db";
    case BudgetKind::Gain: return "gain_db";
    case BudgetKind::TargetPower: return "target_dbm";
  }
  return "?";
}

double signed_db(const BudgetComponent& c) {
  switch (c.kind) {
    case BudgetKind::Loss: return -std::abs(c.value);
    case BudgetKind::Gain: return std::abs(c.value);
    case BudgetKind::TargetPower: return 0.0;
  }
  return 0.0;
}

std::vector<BudgetComponent> parse_budget(std::istream& in) {
  std::vector<BudgetComponent> chain;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto c1 = text.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : text.find(',', c1 + 1);
    if (c2 == std::string_view::npos || text.find(',', c2 + 1) != std::string_view::npos) {
      throw ParseError(lineno, "expected 'name,kind,value'");
    }
    BudgetComponent c;
    c.name = std::string(trim(text.substr(0, c1)));
    const auto kind = trim(text.substr(c1 + 1, c2 - c1 - 1));
    if (kind == "loss_db") c.kind = BudgetKind::Loss;
    else if (kind == "gain_db") c.kind = BudgetKind::Gain;
    else if (kind == "target_dbm") c.kind = BudgetKind::TargetPower;
    else throw ParseError(lineno, "unknown kind '" + std::string(kind) + "'");
    try {
      c.value = parse_double(text.substr(c2 + 1), "budget value");
    } catch (const Error& e) {
      throw ParseError(lineno, e.what());
    }
    if (c.name.empty()) throw ParseError(lineno, "empty component name");
    chain.push_back(std::move(c));
  }
  return chain;
}

std::vector<BudgetComponent> reference_budget_chain() {
  return {
      {"coupling", -1.0, BudgetKind::Loss},
      {"mrr_drop_controller", -0.5, BudgetKind::Loss},
      {"mrr_through_controller", -3.2, BudgetKind::Loss},
      {"propagation_laser_to_soa", -0.09, BudgetKind::Loss},
      {"soa_gain", 20.0, BudgetKind::Gain},
      {"propagation_soa_to_array", -0.09, BudgetKind::Loss},
      {"bending", -0.167, BudgetKind::Loss},
      {"mrr_drop_array", -0.5, BudgetKind::Loss},
      {"mrr_through_array", -3.2, BudgetKind::Loss},
      {"propagation_in_array", -4.91, BudgetKind::Loss},
      {"gst_set_power", -2.67, BudgetKind::TargetPower},
  };
}

double required_laser_power_per_signal(std::span<const BudgetComponent> chain) {
  double net = 0.0;
  const BudgetComponent* target = nullptr;
  for (const auto& c : chain) {
    if (c.kind == BudgetKind::TargetPower) {
      if (target != nullptr) {
        throw Error(ErrorCode::MultipleTargets, "'" + target->name + "' and '" + c.name + "'");
      }
      target = &c;
    } else {
      net += signed_db(c);
    }
  }
  if (target == nullptr) throw Error(ErrorCode::MissingTarget, "budget chain has no target_dbm");
  return target->value - net;
}

LaserPower total_laser_electrical_power(double per_signal_optical_mw, std::uint64_t signal_count,
                                        double wall_plug_efficiency) {
  if (!(per_signal_optical_mw > 0.0) || signal_count == 0 || !(wall_plug_efficiency > 0.0) ||
      wall_plug_efficiency > 1.0) {
    throw Error(ErrorCode::NonPositiveInput,
                "optical power, signal count and efficiency in (0,1] are required");
  }
  LaserPower p;
  p.per_signal_optical_mw = per_signal_optical_mw;
  p.per_signal_electrical_mw = per_signal_optical_mw / wall_plug_efficiency;
  p.total_electrical_w = p.per_signal_electrical_mw * static_cast<double>(signal_count) / 1000.0;
  return p;
}

void check_energy_params(const EnergyModelParams& p) {
  if (!(p.laser_power_per_signal_mw > 0 && p.dac_power_mw > 0 && p.adc_power_mw > 0)) {
    throw Error(ErrorCode::ConfigError, "energy model powers must be > 0");
  }
  if (!(p.wall_plug_efficiency > 0 && p.wall_plug_efficiency <= 1)) {
    throw Error(ErrorCode::ConfigError, "wall-plug efficiency must be in (0, 1]");
  }
  if (p.signals_per_bank_read == 0) {
    throw Error(ErrorCode::ConfigError, "signals_per_bank_read must be > 0");
  }
  if (p.read_power_per_bank_mw && !(*p.read_power_per_bank_mw > 0)) {
    throw Error(ErrorCode::ConfigError, "read power per bank must be > 0");
  }
}

WriteEnergy write_energy_per_bit(const EnergyModelParams& params, const ArrayGeometry& geom,
                                 const TimingParams& timing, const ParallelismCaps& caps) {
  check_energy_params(params);
  const std::uint32_t per_bank = params.signals_per_bank_write != 0
                                     ? params.signals_per_bank_write
                                     : geom.cells_per_tile_side + 1;
  WriteEnergy e;
  e.window_bits = static_cast<double>(caps.write_window_bits);
  e.lines_in_window = e.window_bits / geom.line_bits();
  e.signals_in_flight = e.lines_in_window * geom.banks_per_cacheline * per_bank;
  e.power_mw = e.signals_in_flight * (params.laser_power_per_signal_mw + params.dac_power_mw);
  e.pj_per_bit = e.power_mw * timing.t_set_ns / e.window_bits;
  return e;
}

double write_energy_from_power(double power_mw, const TimingParams& timing,
                               const ParallelismCaps& caps) {
  return power_mw * timing.t_set_ns / static_cast<double>(caps.write_window_bits);
}

ReadEnergy read_energy_per_bit(const EnergyModelParams& params, const ArrayGeometry& geom,
                               const TimingParams& timing) {
  check_energy_params(params);
  ReadEnergy e;
  e.power_per_bank_mw = params.read_power_per_bank_mw.value_or(
      params.signals_per_bank_read *
      (params.laser_power_per_signal_mw + params.dac_power_mw + params.adc_power_mw));
  e.reads_in_window = timing.t_read_ns / timing.t_eoe_ns;
  e.bits_in_window = e.reads_in_window * geom.bits_per_cell;
  e.pj_per_bit = e.power_per_bank_mw * timing.t_read_ns / e.bits_in_window;
  return e;
}

void check_area_params(const AreaModelParams& p) {
  if (!(p.gst_side_nm > 0 && p.gst_separation_nm >= 0 && p.mrr_diameter_um >= 0)) {
    throw Error(ErrorCode::ConfigError,
                "GST side must be > 0; separation and MRR diameter must be >= 0");
  }
}

double array_side_nm(std::uint64_t cells, const AreaModelParams& p) {
  check_area_params(p);
  if (cells == 0) throw Error(ErrorCode::NonPositiveInput, "side needs at least one cell");
  const auto n = static_cast<double>(cells);
  return n * p.gst_side_nm + (n - 1.0) * p.gst_separation_nm + p.mrr_diameter_um * 1000.0;
}

double layer_area_um2(std::uint64_t cells_x, std::uint64_t cells_y, const AreaModelParams& p) {
  return array_side_nm(cells_x, p) * array_side_nm(cells_y, p) / 1e6;
}

AreaReport array_area_and_density(const AreaModelParams& params, const ArrayGeometry& geom) {
  check_geometry(geom);
  const std::uint64_t cells_x =
      static_cast<std::uint64_t>(geom.tile_cols_per_bank) * geom.cells_per_tile_side;
  const std::uint64_t cells_y =
      static_cast<std::uint64_t>(geom.tile_rows_per_bank) * geom.cells_per_tile_side;
  AreaReport r;
  r.width_mm = array_side_nm(cells_x, params) / 1e6;
  r.height_mm = array_side_nm(cells_y, params) / 1e6;
  r.layer_area_mm2 = r.width_mm * r.height_mm;
  r.layers = params.layers != 0 ? params.layers : geom.bank_count;
  r.footprint_mm2 = r.layer_area_mm2;
  r.summed_area_mm2 = r.layer_area_mm2 * r.layers;
  r.capacity_mib = static_cast<double>(geom.capacity_bytes()) / kBytesPerMiB;
  const double area =
      params.density_mode == DensityMode::Footprint ? r.footprint_mm2 : r.summed_area_mm2;
  r.density_mb_per_mm2 = r.capacity_mib / area;
  return r;
}

}  // namespace cosmos
