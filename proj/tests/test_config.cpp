#include <doctest.h>

#include <set>
#include <sstream>

#include "cosmos/config.hpp"
#include "cosmos/error.hpp"

using namespace cosmos;

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_run_config(in);
}

std::size_t error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("presets") {
  const RunConfig four = preset_config("cosmos-4bit");
  CHECK(four.sim.geometry.capacity_bytes() == 2147483648ull);
  CHECK(four.sim.caps.write_window_bits == 1024);
  CHECK(four.sim.caps.read_window_bits == 160);
  CHECK(four.sim.backend == BackendKind::Cosmos);

  const RunConfig eight = preset_config("cosmos-8bit");
  CHECK(eight.sim.geometry.bits_per_cell == 8);
  CHECK(eight.sim.transmission.bits_per_cell == 8);
  CHECK(eight.sim.caps.write_window_bits == 2048);
  CHECK(eight.sim.caps.read_window_bits == 320);
  CHECK(eight.sim.geometry.capacity_bytes() == four.sim.geometry.capacity_bytes());

  const RunConfig two = preset_config("cosmos-2bit");
  CHECK(two.sim.caps.write_window_bits == 512);
  CHECK(two.sim.geometry.capacity_bytes() == four.sim.geometry.capacity_bytes());

  CHECK(preset_config("epcm-2bit").sim.backend == BackendKind::Epcm);
  CHECK(preset_config("fixed-dram").sim.backend == BackendKind::FixedDram);
  CHECK(preset_names().size() == 5);
  for (const auto& n : preset_names()) CHECK_NOTHROW(preset_config(n));
  CHECK_THROWS_AS(preset_config("cosmos-3bit"), Error);
}

TEST_CASE("config text parsing") {
  const RunConfig c = parse(
      "# comment\n"
      "[geometry]\n"
      "bits_per_cell = 8   # trailing comment\n"
      "banks_per_cacheline = 2\n"
      "[run]\n"
      "name = eight\n"
      "preset = cosmos-4bit\n"
      "[caps]\n"
      "read_window_bits = 100\n");
  CHECK(c.sim.name == "eight");
  CHECK(c.sim.geometry.bits_per_cell == 8);
  CHECK(c.sim.transmission.bits_per_cell == 8);
  CHECK(c.sim.caps.read_window_bits == 100);
  CHECK(c.sim.caps.write_window_bits == 2048);

  // The preset is applied first wherever it appears.
  const RunConfig p = parse("[geometry]\nbank_count = 16\n[run]\npreset = cosmos-8bit\n");
  CHECK(p.sim.geometry.bits_per_cell == 8);
  CHECK(p.sim.geometry.bank_count == 16);
  CHECK(p.sim.name == "cosmos-8bit");
}

TEST_CASE("config errors carry line numbers") {
  CHECK(error_line("[geometry]\nbogus = 1\n") == 2);
  CHECK(error_line("[nowhere]\n") == 1);
  CHECK(error_line("bits_per_cell = 4\n") == 1);
  CHECK(error_line("[geometry]\n\nbits_per_cell 4\n") == 3);
  CHECK(error_line("[geometry\n") == 1);
  CHECK(error_line("[geometry]\nbank_count = many\n") == 2);
  CHECK(error_line("[run]\n\npreset = cosmos-9bit\n") == 3);
  CHECK_THROWS_AS(parse("[geometry]\ncapacity_bytes = 1GiB\n"), Error);
  CHECK_THROWS_AS(parse("[geometry]\nbits_per_cell = 2\n"), Error);
  CHECK_THROWS_AS(load_run_config("/nonexistent/cosmos.cfg"), Error);
}

TEST_CASE("apply_setting") {
  RunConfig c = preset_config("cosmos-4bit");
  apply_setting(c, "timing.t_set_ns", "200");
  CHECK(c.sim.timing.t_set_ns == 200.0);
  apply_setting(c, "caps.write_window_bits", "2048");
  CHECK(c.sim.caps.write_window_bits == 2048);
  CHECK_FALSE(c.write_window_cells.has_value());
  CHECK_THROWS_AS(apply_setting(c, "timing.t_nope", "1"), Error);
  CHECK_THROWS_AS(apply_setting(c, "timing", "1"), Error);
  CHECK_THROWS_AS(apply_setting(c, "run.preset", "cosmos-8bit"), Error);
}

TEST_CASE("dump round trips") {
  for (const auto& name : preset_names()) {
    RunConfig c = preset_config(name);
    apply_setting(c, "controller.read_noise", "0.01");
    const std::string text = dump_run_config(c);
    const RunConfig back = parse(text);
    CHECK(dump_run_config(back) == text);
  }
}

TEST_CASE("help lists every key with its unit") {
  const std::string help = config_help();
  std::set<std::string> seen;
  for (const auto& k : config_keys()) {
    CHECK(seen.insert(k.section + "." + k.key).second);
    CHECK(help.find(k.key) != std::string::npos);
    if (!k.unit.empty()) CHECK(help.find("(" + k.unit + ")") != std::string::npos);
    CHECK_FALSE(k.description.empty());
  }
  CHECK(seen.count("geometry.bits_per_cell") == 1);
  CHECK(seen.count("caps.write_window_bits") == 1);
}
