#include <doctest.h>

#include <numeric>
#include <sstream>

#include "cosmos/error.hpp"
#include "cosmos/optics_analysis.hpp"

using namespace cosmos;

TEST_CASE("dBm and mW conversions") {
  CHECK(dbm_to_mw(0.0) == doctest::Approx(1.0));
  CHECK(dbm_to_mw(10.0) == doctest::Approx(10.0));
  CHECK(dbm_to_mw(-3.0) == doctest::Approx(0.501187).epsilon(1e-6));
  CHECK(dbm_to_mw(-7.22) == doctest::Approx(0.189671).epsilon(1e-5));
  for (double x = -30.0; x <= 20.0; x += 0.37) {
    CHECK(mw_to_dbm(dbm_to_mw(x)) == doctest::Approx(x).epsilon(1e-12));
  }
  try {
    mw_to_dbm(0.0);
    FAIL("expected NonPositivePower");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonPositivePower);
  }
  CHECK_THROWS_AS(mw_to_dbm(-1.0), Error);
}

TEST_CASE("budget arithmetic") {
  SUBCASE("a single loss raises the requirement by that many dB") {
    const std::vector<BudgetComponent> chain{{"coupling", -1.0, BudgetKind::Loss},
                                             {"target", -2.67, BudgetKind::TargetPower}};
    CHECK(required_laser_power_per_signal(chain) == doctest::Approx(-1.67));
  }
  SUBCASE("loss sign is normalised") {
    const std::vector<BudgetComponent> a{{"l", 3.0, BudgetKind::Loss},
                                         {"t", 0.0, BudgetKind::TargetPower}};
    const std::vector<BudgetComponent> b{{"l", -3.0, BudgetKind::Loss},
                                         {"t", 0.0, BudgetKind::TargetPower}};
    CHECK(required_laser_power_per_signal(a) == required_laser_power_per_signal(b));
    CHECK(required_laser_power_per_signal(a) == doctest::Approx(3.0));
  }
  SUBCASE("reference chain sums to -9.013 dBm") {
    const auto chain = reference_budget_chain();
    double net = 0.0;
    for (const auto& c : chain) net += signed_db(c);
    CHECK(net == doctest::Approx(20.0 - 13.657));
    const double req = required_laser_power_per_signal(chain);
    CHECK(req == doctest::Approx(-9.013).epsilon(1e-9));
    const Deviation d = deviation(req, -7.22);
    CHECK(d.absolute == doctest::Approx(-1.793).epsilon(1e-9));
    CHECK_FALSE(d.within_absolute(0.05));
  }
  SUBCASE("target handling") {
    std::vector<BudgetComponent> chain{{"l", -1.0, BudgetKind::Loss}};
    try {
      required_laser_power_per_signal(chain);
      FAIL("expected MissingTarget");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::MissingTarget);
    }
    chain.push_back({"t1", 0.0, BudgetKind::TargetPower});
    chain.push_back({"t2", 0.0, BudgetKind::TargetPower});
    try {
      required_laser_power_per_signal(chain);
      FAIL("expected MultipleTargets");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::MultipleTargets);
    }
  }
}

TEST_CASE("budget file parsing") {
  std::istringstream ok(
      "# chain\n"
      "coupling, loss_db, -1.0\n"
      "\n"
      "soa,gain_db,20\n"
      "target,target_dbm,-2.67\n");
  const auto chain = parse_budget(ok);
  REQUIRE(chain.size() == 3);
  CHECK(chain[0].name == "coupling");
  CHECK(chain[1].kind == BudgetKind::Gain);
  CHECK(required_laser_power_per_signal(chain) == doctest::Approx(-21.67));

  auto line_of = [](const std::string& text) -> std::size_t {
    std::istringstream in(text);
    try {
      parse_budget(in);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("a,loss_db,1\nb,bogus,2\n") == 2);
  CHECK(line_of("a,loss_db\n") == 1);
  CHECK(line_of("a,loss_db,1,2\n") == 1);
  CHECK(line_of("\n\na,loss_db,x\n") == 3);
  CHECK(line_of(",loss_db,1\n") == 1);
}

TEST_CASE("laser power") {
  const LaserPower p = total_laser_electrical_power(dbm_to_mw(-7.22), 17242, 0.20);
  CHECK(p.per_signal_electrical_mw == doctest::Approx(0.948356).epsilon(1e-5));
  const LaserPower rounded = total_laser_electrical_power(0.19, 17242, 0.20);
  CHECK(rounded.per_signal_electrical_mw == doctest::Approx(0.95));
  CHECK(rounded.total_electrical_w == doctest::Approx(16.3799));
  CHECK_THROWS_AS(total_laser_electrical_power(0.0, 1, 0.2), Error);
  CHECK_THROWS_AS(total_laser_electrical_power(1.0, 0, 0.2), Error);
  CHECK_THROWS_AS(total_laser_electrical_power(1.0, 1, 1.5), Error);
}

TEST_CASE("read energy per bit") {
  const ArrayGeometry g;
  const TimingParams t;
  const ReadEnergy e = read_energy_per_bit({}, g, t);
  CHECK(e.power_per_bank_mw == doctest::Approx(9.3));
  CHECK(e.reads_in_window == doctest::Approx(5.0));
  CHECK(e.bits_in_window == doctest::Approx(20.0));
  CHECK(e.pj_per_bit == doctest::Approx(11.625));

  // Linear in power, independent of the read time when t_read/t_EOE is fixed.
  EnergyModelParams doubled;
  doubled.read_power_per_bank_mw = 18.6;
  CHECK(read_energy_per_bit(doubled, g, t).pj_per_bit == doctest::Approx(23.25));
  ArrayGeometry g8 = g;
  g8.bits_per_cell = 8;
  g8.banks_per_cacheline = 2;
  CHECK(read_energy_per_bit({}, g8, t).pj_per_bit == doctest::Approx(11.625 / 2));
}

TEST_CASE("write energy per bit") {
  const ArrayGeometry g;
  const TimingParams t;
  const ParallelismCaps caps;
  const WriteEnergy e = write_energy_per_bit({}, g, t, caps);
  CHECK(e.lines_in_window == doctest::Approx(2.0));
  CHECK(e.signals_in_flight == doctest::Approx(264.0));
  CHECK(e.power_mw == doctest::Approx(330.0));
  CHECK(e.pj_per_bit == doctest::Approx(51.5625));
  CHECK(write_energy_from_power(334.8, t, caps) == doctest::Approx(52.3125));

  // Linearity in laser power.
  EnergyModelParams p;
  p.laser_power_per_signal_mw = 1.9;
  p.dac_power_mw = 0.6;
  CHECK(write_energy_per_bit(p, g, t, caps).pj_per_bit == doctest::Approx(2 * 51.5625));

  p = {};
  p.wall_plug_efficiency = 0.0;
  CHECK_THROWS_AS(write_energy_per_bit(p, g, t, caps), Error);
}

TEST_CASE("array side and area") {
  AreaModelParams p;
  p.mrr_diameter_um = 0.0;
  CHECK(array_side_nm(1, p) == doctest::Approx(500.0));
  CHECK(array_side_nm(2, p) == doctest::Approx(1050.0));
  CHECK(layer_area_um2(1, 1, p) == doctest::Approx(0.25));
  p.mrr_diameter_um = 5.0;
  CHECK(array_side_nm(1, p) == doctest::Approx(5500.0));
  CHECK_THROWS_AS(array_side_nm(0, p), Error);

  // Side length grows strictly with cell count, side and separation.
  for (std::uint64_t n = 1; n < 200; ++n) CHECK(array_side_nm(n + 1, p) > array_side_nm(n, p));
  AreaModelParams wider = p;
  wider.gst_separation_nm = 60.0;
  CHECK(array_side_nm(10, wider) > array_side_nm(10, p));

  const AreaReport r = array_area_and_density(p, ArrayGeometry{});
  CHECK(r.width_mm == doctest::Approx(18.02735));
  CHECK(r.height_mm == doctest::Approx(9.01615));
  CHECK(r.layer_area_mm2 == doctest::Approx(18.02735 * 9.01615));
  CHECK(r.layers == 8);
  CHECK(r.capacity_mib == doctest::Approx(2048.0));
  CHECK(r.density_mb_per_mm2 == doctest::Approx(2048.0 / r.footprint_mm2));

  AreaModelParams summed = p;
  summed.density_mode = DensityMode::SummedLayers;
  const AreaReport s = array_area_and_density(summed, ArrayGeometry{});
  CHECK(s.summed_area_mm2 == doctest::Approx(8 * r.layer_area_mm2));
  CHECK(s.density_mb_per_mm2 == doctest::Approx(r.density_mb_per_mm2 / 8));
}

TEST_CASE("deviation") {
  const Deviation d = deviation(51.5625, 40.68);
  CHECK(d.relative == doctest::Approx(0.26752).epsilon(1e-4));
  CHECK(d.within_relative(0.30));
  CHECK_FALSE(d.within_relative(0.25));
  CHECK(deviation(1.0, 0.0).relative == 0.0);
}
