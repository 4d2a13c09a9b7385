#include <doctest.h>

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <random>

#include "cosmos/endurance.hpp"
#include "cosmos/error.hpp"
#include "cosmos/opcm_array.hpp"

using namespace cosmos;

namespace {

double lifetime_oracle(double s, double w, double b, double f) {
  using Dec = boost::multiprecision::cpp_dec_float_50;
  const Dec two25 = boost::multiprecision::pow(Dec(2), 25);
  return static_cast<double>(Dec(s) * Dec(w) / (Dec(b) * Dec(f) * two25));
}

}  // namespace

TEST_CASE("worked lifetime example") {
  CHECK(lifetime_years({}) == doctest::Approx(0.064));
  CHECK(lifetime_years({}) == doctest::Approx(0.064).epsilon(1e-15));
}

TEST_CASE("lifetime matches a high-precision oracle") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> exp10(-3.0, 12.0);
  for (int i = 0; i < 500; ++i) {
    const LifetimeParams p{std::pow(10.0, exp10(rng)), std::pow(10.0, exp10(rng)),
                           std::pow(10.0, exp10(rng)), std::pow(10.0, exp10(rng))};
    const double want = lifetime_oracle(p.size_bytes, p.max_writes_per_cell, p.bytes_per_cycle,
                                        p.frequency_hz);
    CHECK(lifetime_years(p) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("lifetime is proportional to size and endurance, inverse to traffic") {
  const LifetimeParams base;
  LifetimeParams p = base;
  p.size_bytes *= 3;
  CHECK(lifetime_years(p) == doctest::Approx(3 * lifetime_years(base)));
  p = base;
  p.max_writes_per_cell *= 10;
  CHECK(lifetime_years(p) == doctest::Approx(10 * lifetime_years(base)));
  p = base;
  p.bytes_per_cycle *= 4;
  CHECK(lifetime_years(p) == doctest::Approx(lifetime_years(base) / 4));
  p = base;
  p.frequency_hz /= 2;
  CHECK(lifetime_years(p) == doctest::Approx(2 * lifetime_years(base)));
}

TEST_CASE("lifetime rejects non-positive inputs") {
  for (int field = 0; field < 4; ++field) {
    for (double bad : {0.0, -1.0}) {
      LifetimeParams p;
      double* f[] = {&p.size_bytes, &p.max_writes_per_cell, &p.bytes_per_cycle, &p.frequency_hz};
      *f[field] = bad;
      try {
        lifetime_years(p);
        FAIL("expected NonPositiveInput");
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonPositiveInput);
      }
    }
  }
}

TEST_CASE("wear report") {
  const ArrayGeometry g;
  TransmissionModel m;
  OpcmArray a(g, m);
  const DecodedAddress d{0, 1, 2, 3};
  a.write_line(d, CacheLine(64, 0x77));
  WearReport w = wear_report(a);
  CHECK(w.total_cell_writes == 128);
  CHECK(w.touched_cells == 128);
  CHECK(w.max_writes_per_cell == 1);
  CHECK(w.per_bank_writes[0] == 32);
  CHECK(w.per_bank_writes[4] == 0);
  CHECK(w.write_count_histogram.at(1) == 128);

  // A read restores the row in place: one write, one read-erase, one writeback.
  a.read_line(d);
  a.write_line(d, CacheLine(64, 0x77));
  w = wear_report(a);
  CHECK(w.max_writes_per_cell == 3);
  CHECK(w.total_cell_writes == 3 * 128);
  CHECK(w.mean_writes_per_cell == doctest::Approx(384.0 / static_cast<double>(g.cell_count())));
}

TEST_CASE("uniform random writes spread wear evenly across banks") {
  ArrayGeometry g;
  g.tile_rows_per_bank = 8;
  g.tile_cols_per_bank = 8;
  OpcmArray a(g, TransmissionModel{});
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<std::uint64_t> line(0, g.line_count() - 1);
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    a.write_line(decode_address(line(rng) * g.cacheline_bytes, g), CacheLine(64, 1));
  }
  const WearReport w = wear_report(a);
  CHECK(w.total_cell_writes == static_cast<std::uint64_t>(n) * 128);
  // Bank groups are the unit of choice; chi-square over the two groups.
  const double expect = n / 2.0;
  double chi = 0.0;
  for (std::uint32_t grp = 0; grp < 2; ++grp) {
    const double got = static_cast<double>(w.per_bank_writes[grp * 4]) / 32.0;
    chi += (got - expect) * (got - expect) / expect;
    for (std::uint32_t k = 1; k < 4; ++k) {
      CHECK(w.per_bank_writes[grp * 4 + k] == w.per_bank_writes[grp * 4]);
    }
  }
  CHECK(chi < 10.83);  // p = 0.001, one degree of freedom
}
