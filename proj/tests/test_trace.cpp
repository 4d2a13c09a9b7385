#include <doctest.h>

#include <set>
#include <sstream>

#include "cosmos/error.hpp"
#include "cosmos/trace.hpp"

using namespace cosmos;

namespace {

std::size_t parse_error_line(const std::string& text) {
  std::istringstream in(text);
  try {
    load_trace(in);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("trace text format") {
  const std::string data(128, 'a');
  std::istringstream in("# header\n"
                        "0 R 0x40\n"
                        "\n"
                        "12.5 W 0x80 " + data + "\n"
                        "13 w 0xc0\n");
  const LoadedTrace t = load_trace(in);
  REQUIRE(t.requests.size() == 3);
  CHECK(t.warnings.empty());
  CHECK(t.requests[0].op == RequestOp::Read);
  CHECK(t.requests[0].address == 0x40);
  CHECK(t.requests[1].arrival == 12'500);
  CHECK(t.requests[1].data == CacheLine(64, 0xAA));
  CHECK(t.requests[2].data == derived_payload(0, 2, 0xc0, 64));
  CHECK(t.requests[2].id == 2);
}

TEST_CASE("write_trace round trips") {
  ArrayGeometry g;
  TraceGenOptions o;
  o.pattern = TracePattern::Mixed;
  o.length = 500;
  o.gap_ns = 1.237;
  const auto trace = gen_trace(o, g);
  std::ostringstream out;
  write_trace(out, trace);
  std::istringstream in(out.str());
  const LoadedTrace back = load_trace(in);
  CHECK(back.requests == trace);
  CHECK(trace_fingerprint(back.requests) == trace_fingerprint(trace));
}

TEST_CASE("non-monotonic arrivals warn and stable-sort") {
  std::istringstream in("10 R 0x0\n5 R 0x40\n5 R 0x80\n");
  const LoadedTrace t = load_trace(in);
  REQUIRE(t.warnings.size() == 1);
  CHECK(t.warnings[0].find("line 2") != std::string::npos);
  CHECK(t.requests[0].address == 0x40);
  CHECK(t.requests[1].address == 0x80);
  CHECK(t.requests[2].address == 0x0);
  CHECK(t.requests[2].id == 0);
}

TEST_CASE("trace parse errors carry the line number") {
  CHECK(parse_error_line("0 R 0x0\n1 X 0x40\n") == 2);
  CHECK(parse_error_line("0 R\n") == 1);
  CHECK(parse_error_line("0 R 0x0 ff\n") == 1);
  CHECK(parse_error_line("\n0 W 0x0 abcd\n") == 2);
  CHECK(parse_error_line("0 W 0x0 " + std::string(128, 'g') + "\n") == 1);
  CHECK(parse_error_line("-1 R 0x0\n") == 1);
  CHECK(parse_error_line("abc R 0x0\n") == 1);
  CHECK(parse_error_line("0 R zz\n") == 1);
  CHECK(parse_error_line("0 R 0x0 x y\n") == 1);
  CHECK_THROWS_AS(load_trace_file("/nonexistent/trace.txt"), Error);
}

TEST_CASE("generator is deterministic per seed") {
  const ArrayGeometry g;
  TraceGenOptions o;
  o.pattern = TracePattern::Random;
  o.length = 1000;
  o.seed = 42;
  const auto a = gen_trace(o, g);
  const auto b = gen_trace(o, g);
  CHECK(a == b);
  o.seed = 43;
  CHECK(trace_fingerprint(gen_trace(o, g)) != trace_fingerprint(a));
}

TEST_CASE("mixed pattern has the exact read fraction") {
  const ArrayGeometry g;
  TraceGenOptions o;
  o.pattern = TracePattern::Mixed;
  for (std::uint64_t len : {1ull, 3ull, 100ull, 9999ull}) {
    o.length = len;
    const auto t = gen_trace(o, g);
    const auto reads = std::count_if(t.begin(), t.end(),
                                     [](const MemoryRequest& r) { return r.op == RequestOp::Read; });
    CHECK(reads == std::llround(0.67 * static_cast<double>(len)));
    CHECK(t.size() == len);
    for (std::size_t i = 1; i < t.size(); ++i) CHECK(t[i].arrival - t[i - 1].arrival == 100'000);
  }
  o.read_fraction = 1.5;
  CHECK_THROWS_AS(gen_trace(o, g), Error);
}

TEST_CASE("saturating patterns arrive at once on distinct lines") {
  const ArrayGeometry g;
  for (auto p : {TracePattern::SaturateWrite, TracePattern::SaturateRead}) {
    TraceGenOptions o;
    o.pattern = p;
    o.length = 5000;
    const auto t = gen_trace(o, g);
    std::set<std::uint64_t> addrs;
    for (const auto& r : t) {
      CHECK(r.arrival == 0);
      CHECK(r.op == (p == TracePattern::SaturateRead ? RequestOp::Read : RequestOp::Write));
      addrs.insert(r.address);
    }
    CHECK(addrs.size() == t.size());
  }
}

TEST_CASE("address_lines restricts the footprint") {
  const ArrayGeometry g;
  TraceGenOptions o;
  o.pattern = TracePattern::Random;
  o.length = 2000;
  o.address_lines = 8;
  for (const auto& r : gen_trace(o, g)) {
    CHECK(r.address < 8 * 64);
    CHECK(r.address % 64 == 0);
  }
  o.length = 0;
  CHECK_THROWS_AS(gen_trace(o, g), Error);
}

TEST_CASE("pattern names") {
  for (auto p : {TracePattern::SaturateWrite, TracePattern::SaturateRead, TracePattern::Mixed,
                 TracePattern::Random}) {
    CHECK(parse_trace_pattern(to_string(p)) == p);
  }
  CHECK_THROWS_AS(parse_trace_pattern("burst"), Error);
}

TEST_CASE("SplitMix64 reference values and uniformity") {
  // First outputs for seed 0 from the reference implementation.
  SplitMix64 r(0);
  CHECK(r.next() == 0xE220A8397B1DCDAFull);
  CHECK(r.next() == 0x6E789E6AA1B965F4ull);

  SplitMix64 u(99);
  constexpr int kBins = 10;
  constexpr int kDraws = 100000;
  int counts[kBins] = {};
  for (int i = 0; i < kDraws; ++i) ++counts[u.below(kBins)];
  double chi = 0.0;
  for (int c : counts) chi += (c - kDraws / kBins) * (c - kDraws / kBins) / double(kDraws / kBins);
  CHECK(chi < 27.88);  // p = 0.001, nine degrees of freedom
  for (int i = 0; i < 1000; ++i) {
    const double x = u.unit();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}
