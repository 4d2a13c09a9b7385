#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "cosmos/device_model.hpp"
#include "cosmos/error.hpp"

using namespace cosmos;

namespace {

TransmissionModel model_with_bits(std::uint32_t b) {
  TransmissionModel m;
  m.bits_per_cell = b;
  return m;
}

// Brute-force nearest level, written independently of the library decode.
std::uint32_t nearest_level(double ratio, const TransmissionModel& m) {
  std::uint32_t best = 0;
  double best_err = 1e300;
  for (std::uint32_t l = 0; l <= m.max_level(); ++l) {
    const double t = m.t_amorphous - (m.t_amorphous - m.t_crystalline) * l / m.max_level();
    const double err = std::abs(t - ratio);
    if (err < best_err) {
      best_err = err;
      best = l;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("transmission endpoints and interpolation") {
  const TransmissionModel m;
  CHECK(transmission(0, m) == doctest::Approx(1.0));
  CHECK(transmission(15, m) == doctest::Approx(0.21));
  CHECK(transmission(8, m) == doctest::Approx(1.0 - 0.79 * 8.0 / 15.0));
  CHECK(transmission(8, m) == doctest::Approx(0.5787).epsilon(1e-4));
  CHECK_THROWS_AS(transmission(16, m), Error);
}

TEST_CASE("transmission is strictly decreasing and decode inverts it") {
  for (std::uint32_t b = 1; b <= 8; ++b) {
    const auto m = model_with_bits(b);
    for (std::uint32_t l = 0; l <= m.max_level(); ++l) {
      if (l > 0) CHECK(transmission(l, m) < transmission(l - 1, m));
      CHECK(level_from_transmission_ratio(transmission(l, m), m) == l);
    }
  }
}

TEST_CASE("decode equals brute-force nearest level on random ratios") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.2, 1.0);
  for (std::uint32_t b : {2u, 4u, 8u}) {
    const auto m = model_with_bits(b);
    for (int i = 0; i < 2000; ++i) {
      const double r = u(rng);
      CHECK(level_from_transmission_ratio(r, m) == nearest_level(r, m));
    }
  }
}

TEST_CASE("decode rejects impossible ratios") {
  TransmissionModel m;
  auto code = [&](double r) {
    try {
      level_from_transmission_ratio(r, m);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::ConfigError;
  };
  CHECK(code(0.0) == ErrorCode::RatioOutOfRange);
  CHECK(code(-0.5) == ErrorCode::RatioOutOfRange);
  CHECK(code(1.05) == ErrorCode::RatioOutOfRange);
  m.noise_tolerance = 0.1;
  CHECK(level_from_transmission_ratio(1.05, m) == 0);
  CHECK(level_from_transmission_ratio(0.1, m) == 15);
}

TEST_CASE("model validation") {
  TransmissionModel m;
  m.t_crystalline = 1.0;
  CHECK_THROWS_AS(check_transmission_model(m), Error);
  m = TransmissionModel{};
  m.t_amorphous = 1.2;
  CHECK_THROWS_AS(check_transmission_model(m), Error);
  m = TransmissionModel{};
  m.bits_per_cell = 9;
  CHECK_THROWS_AS(check_transmission_model(m), Error);
}

TEST_CASE("column transmission is a product") {
  const TransmissionModel m;
  std::vector<CellState> col(32);
  CHECK(column_transmission(col, m) == doctest::Approx(1.0));
  col[5].level = 15;
  CHECK(column_transmission(col, m) == doctest::Approx(0.21));
  col[9].level = 15;
  CHECK(column_transmission(col, m) == doctest::Approx(0.0441));

  std::mt19937 rng(1);
  for (auto& c : col) c.level = static_cast<std::uint8_t>(rng() % 16);
  const double whole = column_transmission(col, m);
  std::vector<CellState> shuffled = col;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  CHECK(column_transmission(shuffled, m) == doctest::Approx(whole).epsilon(1e-12));
  const std::span<const CellState> all(col);
  CHECK(column_transmission(all.first(10), m) * column_transmission(all.subspan(10), m) ==
        doctest::Approx(whole).epsilon(1e-12));
}

TEST_CASE("apply_write counts operations, not changes") {
  CHECK(apply_write({3, 7}, 0) == CellState{0, 8});
  CHECK(apply_write({0, 0}, 15) == CellState{15, 1});
  CellState c{};
  c = apply_write(c, 5);
  c = apply_write(c, 5);
  CHECK(c == CellState{5, 2});

  std::mt19937 rng(11);
  CellState cell{};
  std::uint32_t log = 0;
  for (int i = 0; i < 500; ++i) {
    cell = apply_write(cell, rng() % 16);
    ++log;
  }
  CHECK(cell.write_count == log);
}

TEST_CASE("write pulses") {
  CHECK(write_pulse_for_level(0, 4) == PulseSpec{180.0, 25.0, PulseKind::Reset});
  CHECK(write_pulse_for_level(15, 4) == PulseSpec{130.0, 250.0, PulseKind::Set});
  const PulseSpec low = write_pulse_for_level(1, 4);
  CHECK(low.kind == PulseKind::Partial);
  CHECK(low.energy_pj == doctest::Approx(60.0));
  CHECK(low.duration_ns == doctest::Approx(50.0));
  const PulseSpec mid = write_pulse_for_level(8, 4);
  CHECK(mid.energy_pj == doctest::Approx(60.0 + 70.0 * 7.0 / 14.0));
  CHECK(mid.duration_ns == doctest::Approx(50.0 + 200.0 * 7.0 / 14.0));
  CHECK_THROWS_AS(write_pulse_for_level(16, 4), Error);

  // Partial pulses are monotone in level.
  for (std::uint32_t l = 2; l < 15; ++l) {
    CHECK(write_pulse_for_level(l, 4).energy_pj > write_pulse_for_level(l - 1, 4).energy_pj);
  }
  // A 1-bit cell has only RESET and SET.
  CHECK(write_pulse_for_level(1, 1).kind == PulseKind::Set);
}

TEST_CASE("pulse table and EPCM validation") {
  PulseTable t;
  CHECK_NOTHROW(check_pulse_table(t));
  t.read.duration_ns = 2.0;
  CHECK_THROWS_AS(check_pulse_table(t), Error);
  EpcmParams e;
  CHECK_NOTHROW(check_epcm_params(e));
  e.t_read_ns = 0;
  CHECK_THROWS_AS(check_epcm_params(e), Error);
}
