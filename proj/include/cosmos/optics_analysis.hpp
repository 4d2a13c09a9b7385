#pragma once

#include <cstdint>
#include <cmath>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cosmos/controller.hpp"
#include "cosmos/geometry.hpp"

namespace cosmos {

double dbm_to_mw(double dbm);
/// Throws Error{NonPositivePower} for mw <= 0.
double mw_to_dbm(double mw);

/// A computed value set beside a published reference. Never reconciled.
struct Deviation {
  double computed = 0.0;
  double published = 0.0;
  double absolute = 0.0;  // computed - published
  double relative = 0.0;  // absolute / |published|

  bool within_relative(double tolerance) const { return std::abs(relative) <= tolerance; }
  bool within_absolute(double tolerance) const { return std::abs(absolute) <= tolerance; }
};

Deviation deviation(double computed, double published);

// ---------------------------------------------------------------------------
// Optical power budget

enum class BudgetKind { Loss, Gain, TargetPower };

std::string_view to_string(BudgetKind kind);

struct BudgetComponent {
  std::string name;
  double value = 0.0;  // dB for losses/gains, dBm for the target
  BudgetKind kind = BudgetKind::Loss;
};

/// Signed contribution in dB: losses count negative and gains positive
/// whatever sign the value was written with.
double signed_db(const BudgetComponent& c);

/// Budget file: one `name,kind,value` per line, kind in {loss_db, gain_db,
/// target_dbm}; blank lines and `#` comments ignored.
std::vector<BudgetComponent> parse_budget(std::istream& in);

/// Loss/gain path from laser to the farthest cell of the 2 GB array, with
/// the cell switching requirement as the target.
std::vector<BudgetComponent> reference_budget_chain();

/// Target dBm minus the net signed gain of every loss/gain entry.
double required_laser_power_per_signal(std::span<const BudgetComponent> chain);

struct LaserPower {
  double per_signal_optical_mw = 0.0;
  double per_signal_electrical_mw = 0.0;
  double total_electrical_w = 0.0;
};

LaserPower total_laser_electrical_power(double per_signal_optical_mw, std::uint64_t signal_count,
                                        double wall_plug_efficiency);

// ---------------------------------------------------------------------------
// Energy per bit

struct EnergyModelParams {
  double laser_power_per_signal_mw = 0.95;  // electrical, SOA included
  double dac_power_mw = 0.3;
  double adc_power_mw = 0.3;
  double wall_plug_efficiency = 0.20;
  std::uint32_t signals_per_bank_write = 0;  // 0 = one row signal + n column signals
  std::uint32_t signals_per_bank_read = 6;
  // Overrides the composed per-bank read power when set.
  std::optional<double> read_power_per_bank_mw;
};

void check_energy_params(const EnergyModelParams& p);

struct WriteEnergy {
  double lines_in_window = 0.0;
  double signals_in_flight = 0.0;
  double power_mw = 0.0;
  double window_bits = 0.0;
  double pj_per_bit = 0.0;
};

/// Laser and DAC power of every signal engaged by the cache lines that fit
/// in one write window, held for t_SET, spread over the window's bits.
WriteEnergy write_energy_per_bit(const EnergyModelParams& params, const ArrayGeometry& geom,
                                 const TimingParams& timing, const ParallelismCaps& caps);

/// Energy per bit implied by a given total write power over the same window.
double write_energy_from_power(double power_mw, const TimingParams& timing,
                               const ParallelismCaps& caps);

struct ReadEnergy {
  double power_per_bank_mw = 0.0;
  double reads_in_window = 0.0;  // t_read / t_EOE
  double bits_in_window = 0.0;
  double pj_per_bit = 0.0;
};

ReadEnergy read_energy_per_bit(const EnergyModelParams& params, const ArrayGeometry& geom,
                               const TimingParams& timing);

// ---------------------------------------------------------------------------
// Area and density

enum class DensityMode { Footprint, SummedLayers };

struct AreaModelParams {
  double gst_side_nm = 500.0;
  double gst_separation_nm = 50.0;
  double mrr_diameter_um = 5.0;
  std::uint32_t layers = 0;  // 0 = one layer per bank
  DensityMode density_mode = DensityMode::Footprint;
};

void check_area_params(const AreaModelParams& p);

/// Length of a line of `cells` cells plus the leading microring column.
double array_side_nm(std::uint64_t cells, const AreaModelParams& p);

double layer_area_um2(std::uint64_t cells_x, std::uint64_t cells_y, const AreaModelParams& p);

struct AreaReport {
  double width_mm = 0.0;
  double height_mm = 0.0;
  double layer_area_mm2 = 0.0;
  std::uint32_t layers = 0;
  double footprint_mm2 = 0.0;
  double summed_area_mm2 = 0.0;
  double capacity_mib = 0.0;
  double density_mb_per_mm2 = 0.0;  // MiB per mm^2, over the area chosen by density_mode
};

AreaReport array_area_and_density(const AreaModelParams& params, const ArrayGeometry& geom);

}  // namespace cosmos
