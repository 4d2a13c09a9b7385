#include <doctest.h>

#include <map>
#include <random>

#include "cosmos/controller.hpp"
#include "cosmos/error.hpp"

using namespace cosmos;

namespace {

TransmissionModel model_for(const ArrayGeometry& g) {
  TransmissionModel m;
  m.bits_per_cell = g.bits_per_cell;
  return m;
}

DramCommand rd(std::uint64_t id, std::uint64_t addr, TimePs at = 0) {
  return {CommandKind::Read, id, at, addr, {}};
}

DramCommand wr(std::uint64_t id, std::uint64_t addr, std::uint8_t fill, std::uint32_t bytes = 64,
               TimePs at = 0) {
  return {CommandKind::Write, id, at, addr, CacheLine(bytes, fill)};
}

// Minimal time-stepped driver: completes ops in time order, retries issue
// at the controller's wakeup. Good enough for unit tests of one channel.
struct Driver {
  Controller& c;
  TimePs now = 0;
  std::multimap<TimePs, std::uint64_t> pending;
  std::vector<IssuedOp> issued;
  std::map<std::uint64_t, Completion> done_by_request;

  void issue() {
    for (const auto& op : c.issue_ready(now)) {
      issued.push_back(op);
      pending.emplace(op.complete, op.op_id);
    }
  }

  void run_until_quiet(TimePs limit = 1'000'000'000) {
    issue();
    while (now < limit) {
      std::optional<TimePs> next;
      if (!pending.empty()) next = pending.begin()->first;
      if (auto w = c.next_wakeup(); w && (!next || *w < *next)) next = *w;
      if (!next) break;
      now = std::max(now, *next);
      while (!pending.empty() && pending.begin()->first <= now) {
        const auto id = pending.begin()->second;
        pending.erase(pending.begin());
        Completion done = c.complete(id, now);
        if (done.op.kind != OpKind::Writeback) done_by_request[done.op.request_id] = done;
      }
      issue();
    }
  }
};

}  // namespace

TEST_CASE("command parsing and no-op commands") {
  CHECK(parse_command_kind("ACT") == CommandKind::Activate);
  CHECK(parse_command_kind("WR") == CommandKind::Write);
  try {
    parse_command_kind("MRS");
    FAIL("expected UnknownCommand");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownCommand);
  }

  const ArrayGeometry g;
  Controller c(g, {}, {}, model_for(g));
  CHECK(c.accept({CommandKind::Activate, 1, 0, 0, {}}, 0) == AcceptResult::NoOp);
  CHECK(c.accept({CommandKind::Precharge, 2, 0, 0, {}}, 0) == AcceptResult::NoOp);
  CHECK(c.accept({CommandKind::Refresh, 3, 0, 0, {}}, 0) == AcceptResult::NoOp);
  CHECK(c.quiescent());
  CHECK(c.stats().activate_noops == 1);
  CHECK(c.stats().refresh_noops == 1);
  CHECK(c.array().total_cell_writes() == 0);
}

TEST_CASE("isolated read and write latencies") {
  const ArrayGeometry g;
  Controller c(g, {}, {}, model_for(g));
  Driver d{c};
  REQUIRE(c.accept(wr(1, 0x40, 0xAB), 0) == AcceptResult::Queued);
  d.run_until_quiet();
  REQUIRE(d.issued.size() == 1);
  CHECK(d.issued[0].complete - d.issued[0].issue == 165'000);

  Controller c2(g, {}, {}, model_for(g));
  Driver d2{c2};
  c2.accept(rd(1, 0x80), 0);
  d2.run_until_quiet();
  REQUIRE(d2.issued.size() >= 1);
  CHECK(d2.issued[0].kind == OpKind::Read);
  CHECK(d2.issued[0].complete - d2.issued[0].issue == 30'000);
  // The read parks its data and then writes it back opportunistically.
  CHECK(d2.issued.back().kind == OpKind::Writeback);
  CHECK(c2.quiescent());
}

TEST_CASE("read after read hits the holding buffer in one t_EOE") {
  const ArrayGeometry g;
  Controller c(g, {}, {}, model_for(g));
  Driver d{c};
  c.accept(wr(1, 0x40, 0x5C), 0);
  d.run_until_quiet();
  const TimePs t0 = d.now;
  c.accept(rd(2, 0x40, t0), t0);
  d.issue();
  // Complete the array read, then a second read of the same line arrives.
  d.now = t0 + 30'000;
  Completion first = c.complete(d.issued.back().op_id, d.now);
  d.pending.clear();
  CHECK(first.data == CacheLine(64, 0x5C));
  c.accept(rd(3, 0x40, d.now), d.now);
  d.issued.clear();
  d.issue();
  REQUIRE(d.issued.size() == 1);
  CHECK(d.issued[0].kind == OpKind::BufferHit);
  CHECK(d.issued[0].complete - d.issued[0].issue == 5'000);
  d.run_until_quiet();
  CHECK(d.done_by_request.at(3).data == CacheLine(64, 0x5C));
  CHECK(c.stats().buffer_hits == 1);
  CHECK(c.quiescent());
}

TEST_CASE("hazards resolve to program order") {
  const ArrayGeometry g;
  SUBCASE("RAW: read waits for the in-flight write to the same line") {
    Controller c(g, {}, {}, model_for(g));
    Driver d{c};
    c.accept(wr(1, 0xC0, 0x11), 0);
    c.accept(rd(2, 0xC0), 0);
    d.run_until_quiet();
    CHECK(d.done_by_request.at(2).data == CacheLine(64, 0x11));
    CHECK(d.done_by_request.at(2).op.issue >= d.done_by_request.at(1).op.complete);
  }
  SUBCASE("WAW: the later write wins") {
    Controller c(g, {}, {}, model_for(g));
    Driver d{c};
    c.accept(wr(1, 0xC0, 0x11), 0);
    c.accept(wr(2, 0xC0, 0x22), 0);
    c.accept(rd(3, 0xC0), 0);
    d.run_until_quiet();
    CHECK(d.done_by_request.at(3).data == CacheLine(64, 0x22));
    CHECK(c.array().peek_line(decode_address(0xC0, g)) == CacheLine(64, 0x22));
  }
  SUBCASE("WAR: a write after a read invalidates the buffered copy") {
    Controller c(g, {}, {}, model_for(g));
    Driver d{c};
    c.accept(wr(1, 0xC0, 0x11), 0);
    c.accept(rd(2, 0xC0), 0);
    c.accept(wr(3, 0xC0, 0x33), 0);
    c.accept(rd(4, 0xC0), 0);
    d.run_until_quiet();
    CHECK(d.done_by_request.at(2).data == CacheLine(64, 0x11));
    CHECK(d.done_by_request.at(4).data == CacheLine(64, 0x33));
    CHECK(c.quiescent());
    CHECK(c.array().peek_line(decode_address(0xC0, g)) == CacheLine(64, 0x33));
  }
  SUBCASE("hazard_check dispositions") {
    Controller c(g, {}, {}, model_for(g));
    MemoryRequest r{1, 0, RequestOp::Read, 0x100, {}};
    CHECK(c.hazard_check(r) == Disposition::ArrayAccess);
    c.accept(wr(1, 0x100, 1), 0);
    Driver d{c};
    d.issue();
    CHECK(c.hazard_check(r) == Disposition::StallConflict);
  }
}

TEST_CASE("issue spacing, holding bound and window rate under a read flood") {
  const ArrayGeometry g;
  ControllerOptions opts;
  opts.queue_capacity = 4096;
  Controller c(g, {}, {}, model_for(g), opts);
  Driver d{c};
  for (std::uint64_t i = 0; i < 2000; ++i) c.accept(rd(i, i * 64), 0);
  d.run_until_quiet();
  CHECK(c.quiescent());
  CHECK(c.stats().holding_high_water <= 16);
  CHECK(c.stats().min_issue_gap >= 5'000);
  CHECK(c.stats().forced_writebacks > 0);
  CHECK(c.stats().array_reads == 2000);

  // Admitted read bits never exceed depth + rate * elapsed.
  std::vector<TimePs> reads;
  for (const auto& op : d.issued) if (op.kind == OpKind::Read) reads.push_back(op.issue);
  const double line_bits = static_cast<double>(g.line_bits());
  for (std::size_t i = 0; i < reads.size(); i += 97) {
    for (std::size_t j = i; j < reads.size(); j += 13) {
      const double admitted = line_bits * static_cast<double>(j - i + 1);
      const double allowed = 160.0 + line_bits + 160.0 * ps_to_ns(reads[j] - reads[i]) / 25.0;
      CHECK(admitted <= allowed);
    }
  }
}

TEST_CASE("write flood respects the write window rate") {
  const ArrayGeometry g;
  ControllerOptions opts;
  opts.queue_capacity = 4096;
  Controller c(g, {}, {}, model_for(g), opts);
  Driver d{c};
  const int n = 1000;
  for (int i = 0; i < n; ++i) c.accept(wr(i, i * 64ull, static_cast<std::uint8_t>(i)), 0);
  d.run_until_quiet();
  const TimePs first = d.issued.front().issue;
  const TimePs last = d.issued.back().issue;
  // 512-bit writes at 1024 bits per 160 ns: one write per 80 ns on average.
  CHECK(ps_to_ns(last - first) >= (n - 1 - 2) * 80.0);
  CHECK(ps_to_ns(last - first) <= (n - 1) * 80.0 + 1.0);
}

TEST_CASE("idle queues drain the holding buffer opportunistically") {
  const ArrayGeometry g;
  Controller c(g, {}, {}, model_for(g));
  Driver d{c};
  for (std::uint64_t i = 0; i < 3; ++i) c.accept(rd(i, 0x1000 + i * 64), 0);
  d.run_until_quiet();
  CHECK(c.stats().opportunistic_writebacks == 3);
  CHECK(c.stats().forced_writebacks == 0);
  CHECK(c.holding_buffer().empty());
  CHECK(c.quiescent());
}

TEST_CASE("queue capacity") {
  const ArrayGeometry g;
  ControllerOptions opts;
  opts.queue_capacity = 2;
  Controller c(g, {}, {}, model_for(g), opts);
  CHECK(c.accept(rd(1, 0), 0) == AcceptResult::Queued);
  CHECK(c.accept(rd(2, 64), 0) == AcceptResult::Queued);
  CHECK(c.accept(rd(3, 128), 0) == AcceptResult::QueueFull);
  CHECK(c.stats().queue_full_rejections == 1);
}

TEST_CASE("malformed requests") {
  const ArrayGeometry g;
  Controller c(g, {}, {}, model_for(g));
  CHECK_THROWS_AS(c.accept(wr(1, 0, 0, 32), 0), Error);
  CHECK_THROWS_AS(c.accept({CommandKind::Read, 1, 0, 0, CacheLine(64)}, 0), Error);
  CHECK_THROWS_AS(c.accept(rd(1, 0x41), 0), Error);
  CHECK_THROWS_AS(c.complete(99, 0), Error);
}

TEST_CASE("bit-rate window") {
  BitRateWindow w(1024, 160'000);
  CHECK(w.earliest(0, 512) == 0);
  w.admit(0, 512);
  w.admit(0, 512);
  CHECK(w.outstanding_bits(0) == doctest::Approx(1024));
  CHECK(w.earliest(0, 512) == 80'000);
  CHECK_THROWS_AS(w.admit(1, 512), Error);
  CHECK(w.outstanding_bits(80'000) == doctest::Approx(512));
  CHECK(w.outstanding_bits(1'000'000) == doctest::Approx(0));

  // An access wider than the window waits for a full bucket and then goes into debt.
  BitRateWindow narrow(160, 25'000);
  narrow.admit(0, 512);
  CHECK(narrow.outstanding_bits(0) == doctest::Approx(512));
  CHECK(narrow.earliest(0, 512) == 80'000);

  CHECK_THROWS_AS(BitRateWindow(0, 10), Error);
}

TEST_CASE("timing and cap validation") {
  TimingParams t;
  CHECK(t.read_latency() == 30'000);
  CHECK(t.write_latency() == 165'000);
  t.t_read_ns = 200;
  CHECK_THROWS_AS(check_timing(t), Error);
  ParallelismCaps caps;
  caps.read_window_bits = 0;
  CHECK_THROWS_AS(check_caps(caps), Error);
}
