#include "cosmos/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "cosmos/error.hpp"
#include "cosmos/trace.hpp"

namespace cosmos {

using ordered_json = nlohmann::ordered_json;

bool EventQueue::Later::operator()(const Event& a, const Event& b) const {
  if (a.time != b.time) return a.time > b.time;
  if (a.kind != b.kind) return a.kind > b.kind;
  return a.seq > b.seq;
}

void EventQueue::push(TimePs time, EventKind kind, std::uint64_t payload) {
  if (time < now_) throw Error(ErrorCode::OutOfRange, "event scheduled in the past");
  heap_.push(Event{time, kind, next_seq_++, payload});
}

Event EventQueue::pop() {
  Event e = heap_.top();
  heap_.pop();
  now_ = e.time;
  ++dispatched_;
  return e;
}

BackendKind parse_backend_kind(std::string_view name) {
  if (name == "cosmos") return BackendKind::Cosmos;
  if (name == "epcm") return BackendKind::Epcm;
  if (name == "fixed-dram" || name == "dram") return BackendKind::FixedDram;
  throw Error(ErrorCode::ConfigError,
              "unknown backend '" + std::string(name) + "' (cosmos, epcm, fixed-dram)");
}

std::string_view to_string(BackendKind kind) {
  switch (kind) {
    case BackendKind::Cosmos: return "cosmos";
    case BackendKind::Epcm: return "epcm";
    case BackendKind::FixedDram: return "fixed-dram";
  }
  return "?";
}

void check_sim_config(const SimConfig& c) {
  check_geometry(c.geometry);
  switch (c.backend) {
    case BackendKind::Cosmos:
      check_timing(c.timing);
      check_caps(c.caps);
      check_transmission_model(c.transmission);
      if (c.transmission.bits_per_cell != c.geometry.bits_per_cell) {
        throw Error(ErrorCode::ConfigError, "device bits_per_cell differs from geometry");
      }
      check_energy_params(c.energy);
      break;
    case BackendKind::Epcm:
      check_epcm_params(c.epcm);
      break;
    case BackendKind::FixedDram:
      if (!(c.dram_latency_ns > 0)) throw Error(ErrorCode::ConfigError, "DRAM latency must be > 0");
      break;
  }
  if (!(c.lifetime_frequency_hz > 0 && c.max_writes_per_cell > 0)) {
    throw Error(ErrorCode::ConfigError, "lifetime frequency and endurance must be > 0");
  }
}

void Simulator::PerBankBusy::add(TimePs from, TimePs to) {
  if (end < start) {
    start = from;
    end = to;
  } else if (from > end) {
    total += end - start;
    start = from;
    end = to;
  } else {
    end = std::max(end, to);
  }
}

Simulator::Simulator(SimConfig config) : config_(std::move(config)) { check_sim_config(config_); }

SimulationResult Simulator::run(std::span<const MemoryRequest> trace) {
  for (std::size_t i = 1; i < trace.size(); ++i) {
    if (trace[i].arrival < trace[i - 1].arrival) {
      throw Error(ErrorCode::ConfigError, "trace is not sorted by arrival time");
    }
  }
  events_ = EventQueue{};
  bank_busy_.clear();
  read_nj_ = write_nj_ = writeback_nj_ = 0.0;
  writeback_bits_ = 0;
  deferred_requests_ = 0;
  first_arrival_ = trace.empty() ? 0 : trace.front().arrival;
  last_completion_ = drain_end_ = first_arrival_;

  SimulationResult out;
  out.records.resize(trace.size());
  for (std::size_t i = 0; i < trace.size(); ++i) {
    auto& r = out.records[i];
    r.id = trace[i].id;
    r.op = trace[i].op;
    r.address = trace[i].address;
    r.arrival = trace[i].arrival;
  }
  if (config_.backend == BackendKind::Cosmos) {
    run_cosmos(trace, out);
  } else {
    run_baseline(trace, out);
  }
  finish_report(trace, out);
  if (!config_.keep_records) out.records.clear();
  return out;
}

void Simulator::run_cosmos(std::span<const MemoryRequest> trace, SimulationResult& out) {
  const auto& geom = config_.geometry;
  controller_ = std::make_unique<Controller>(geom, config_.timing, config_.caps,
                                             config_.transmission, config_.controller);
  Controller& ctl = *controller_;
  bank_busy_.resize(geom.bank_count);
  const double line_bits = static_cast<double>(geom.line_bits());
  const double write_nj_per_line =
      write_energy_per_bit(config_.energy, geom, config_.timing, config_.caps).pj_per_bit *
      line_bits / 1000.0;
  const double read_nj_per_line =
      read_energy_per_bit(config_.energy, geom, config_.timing).pj_per_bit * line_bits / 1000.0;

  std::deque<std::size_t> pending;  // arrived, waiting for queue space
  TimePs issue_at = -1;  // time of the live Issue event, -1 when none
  std::uint64_t issue_generation = 0;
  std::size_t completed = 0;

  auto schedule_issue = [&](TimePs t) {
    if (issue_at >= 0 && issue_at <= t) return;
    issue_at = t;
    events_.push(t, EventKind::Issue, ++issue_generation);
  };
  auto admit_pending = [&](TimePs now) {
    while (!pending.empty() && ctl.queue_depth() < config_.controller.queue_capacity) {
      const MemoryRequest& r = trace[pending.front()];
      DramCommand cmd{r.op == RequestOp::Write ? CommandKind::Write : CommandKind::Read,
                      pending.front(), r.arrival, r.address, r.data};
      if (ctl.accept(cmd, now) == AcceptResult::QueueFull) break;
      pending.pop_front();
    }
  };

  if (!trace.empty()) events_.push(trace.front().arrival, EventKind::RequestArrival, 0);
  while (!events_.empty()) {
    const Event e = events_.pop();
    const TimePs now = e.time;
    switch (e.kind) {
      case EventKind::RequestArrival:
        if (!pending.empty() || ctl.queue_depth() >= config_.controller.queue_capacity) {
          ++deferred_requests_;
        }
        pending.push_back(e.payload);
        if (e.payload + 1 < trace.size()) {
          events_.push(trace[e.payload + 1].arrival, EventKind::RequestArrival, e.payload + 1);
        }
        admit_pending(now);
        schedule_issue(now);
        break;

      case EventKind::Issue: {
        if (e.payload != issue_generation) break;  // superseded by an earlier issue
        issue_at = -1;
        const auto ops = ctl.issue_ready(now);
        for (const IssuedOp& op : ops) {
          events_.push(op.complete,
                       op.kind == OpKind::Writeback ? EventKind::Writeback : EventKind::StepComplete,
                       op.op_id);
          if (op.kind != OpKind::Writeback) {
            auto& rec = out.records[op.request_id];
            rec.issue = now;
            rec.served_as = op.kind;
          }
          if (op.kind != OpKind::BufferHit) {
            for (std::uint32_t k = 0; k < geom.banks_per_cacheline; ++k) {
              bank_busy_[bank_of_chunk(op.bank_group, k, geom)].add(op.issue, op.complete);
            }
          }
        }
        if (!ops.empty()) admit_pending(now);
        if (const auto wake = ctl.next_wakeup()) schedule_issue(*wake);
        break;
      }

      case EventKind::StepComplete:
      case EventKind::Writeback: {
        Completion c = ctl.complete(e.payload, now);
        switch (c.op.kind) {
          case OpKind::Write: write_nj_ += write_nj_per_line; break;
          case OpKind::Read: read_nj_ += read_nj_per_line; break;
          case OpKind::Writeback:
            writeback_nj_ += write_nj_per_line;
            writeback_bits_ += geom.line_bits();
            break;
          case OpKind::BufferHit: break;
        }
        if (c.op.kind != OpKind::Writeback) {
          auto& rec = out.records[c.op.request_id];
          rec.complete = now;
          if (config_.keep_read_data && rec.op == RequestOp::Read) rec.data = std::move(c.data);
          if (++completed == trace.size()) events_.push(now, EventKind::RunEnd);
        }
        schedule_issue(now);
        break;
      }

      case EventKind::RunEnd:
        last_completion_ = now;
        break;
    }
    drain_end_ = now;
  }

  if (completed != trace.size() || !ctl.quiescent()) {
    throw Error(ErrorCode::ConfigError,
                "simulation stalled with " + std::to_string(trace.size() - completed) +
                    " requests outstanding");
  }
  out.wear = wear_report(ctl.array());
}

void Simulator::run_baseline(std::span<const MemoryRequest> trace, SimulationResult& out) {
  const bool epcm = config_.backend == BackendKind::Epcm;
  const EpcmParams& p = config_.epcm;
  const std::uint32_t line_bytes = config_.geometry.cacheline_bytes;
  const double line_bits = 8.0 * line_bytes;
  const std::uint64_t bytes_per_burst = static_cast<std::uint64_t>(p.bus_width_bits / 8) * p.burst_length;
  const TimePs transfer = ns_to_ps(p.t_burst_ns) *
                          static_cast<TimePs>((line_bytes + bytes_per_burst - 1) / bytes_per_burst);
  const TimePs dram_latency = ns_to_ps(config_.dram_latency_ns);

  if (epcm) bank_busy_.resize(p.bank_count);
  std::vector<TimePs> bank_free(bank_busy_.size(), 0);
  std::vector<std::optional<std::uint64_t>> open_row(bank_busy_.size());
  TimePs bus_free = 0;
  TimePs last_start = 0;
  std::size_t completed = 0;

  if (!trace.empty()) events_.push(trace.front().arrival, EventKind::RequestArrival, 0);
  while (!events_.empty()) {
    const Event e = events_.pop();
    const TimePs now = e.time;
    switch (e.kind) {
      case EventKind::RequestArrival: {
        const std::size_t i = e.payload;
        if (i + 1 < trace.size()) {
          events_.push(trace[i + 1].arrival, EventKind::RequestArrival, i + 1);
        }
        const MemoryRequest& r = trace[i];
        auto& rec = out.records[i];
        if (!epcm) {
          rec.issue = now;
          rec.complete = now + dram_latency;
          rec.served_as = r.op == RequestOp::Read ? OpKind::Read : OpKind::Write;
          events_.push(rec.complete, EventKind::StepComplete, i);
          break;
        }
        // In-order issue with a per-bank open-row buffer and a shared bus.
        const std::uint64_t bank = (r.address / p.row_bytes) % p.bank_count;
        const std::uint64_t row = r.address / p.row_bytes / p.bank_count;
        const TimePs start = std::max({now, last_start, bank_free[bank]});
        TimePs done = 0;
        if (r.op == RequestOp::Read) {
          const TimePs array_done =
              open_row[bank] == row ? start : start + ns_to_ps(p.t_read_ns);
          const TimePs bus_start = std::max(array_done, bus_free);
          done = bus_start + transfer;
          bus_free = done;
          read_nj_ += p.read_energy_pj_per_bit * line_bits / 1000.0;
          rec.served_as = OpKind::Read;
        } else {
          const TimePs bus_start = std::max(start, bus_free);
          bus_free = bus_start + transfer;
          done = bus_free + ns_to_ps(p.t_set_ns);
          write_nj_ += p.write_energy_pj_per_bit * line_bits / 1000.0;
          rec.served_as = OpKind::Write;
        }
        open_row[bank] = row;
        bank_free[bank] = done;
        bank_busy_[bank].add(start, done);
        last_start = start;
        rec.issue = start;
        rec.complete = done;
        events_.push(done, EventKind::StepComplete, i);
        break;
      }
      case EventKind::StepComplete:
        if (++completed == trace.size()) events_.push(now, EventKind::RunEnd);
        break;
      case EventKind::RunEnd:
        last_completion_ = now;
        break;
      case EventKind::Issue:
      case EventKind::Writeback:
        break;
    }
    drain_end_ = now;
  }
}

void Simulator::finish_report(std::span<const MemoryRequest> trace, SimulationResult& out) {
  StatsReport& s = out.report;
  s.name = config_.name;
  s.backend = config_.backend;
  s.trace_fingerprint = trace_fingerprint(trace);
  s.requests = trace.size();
  s.events = events_.dispatched();

  TimePs read_lat = 0, write_lat = 0, max_lat = 0;
  for (const auto& rec : out.records) {
    const TimePs lat = rec.complete - rec.arrival;
    max_lat = std::max(max_lat, lat);
    if (rec.op == RequestOp::Read) {
      ++s.reads;
      read_lat += lat;
    } else {
      ++s.writes;
      write_lat += lat;
    }
  }
  const std::uint64_t line = config_.geometry.cacheline_bytes;
  s.read_bytes = s.reads * line;
  s.write_bytes = s.writes * line;
  const TimePs span = last_completion_ - first_arrival_;
  s.span_ns = ps_to_ns(span);
  if (span > 0) {
    // bytes per ns is GB/s
    s.read_throughput_gbs = static_cast<double>(s.read_bytes) / s.span_ns;
    s.write_throughput_gbs = static_cast<double>(s.write_bytes) / s.span_ns;
    s.total_throughput_gbs = s.read_throughput_gbs + s.write_throughput_gbs;
  }
  if (s.reads) s.avg_read_latency_ns = ps_to_ns(read_lat) / static_cast<double>(s.reads);
  if (s.writes) s.avg_write_latency_ns = ps_to_ns(write_lat) / static_cast<double>(s.writes);
  if (s.requests) {
    s.avg_memory_latency_ns = ps_to_ns(read_lat + write_lat) / static_cast<double>(s.requests);
  }
  s.max_latency_ns = ps_to_ns(max_lat);
  s.drain_end_ns = ps_to_ns(drain_end_);

  auto& en = s.energy;
  en.read_nj = read_nj_;
  en.write_nj = write_nj_;
  en.writeback_nj = writeback_nj_;
  en.total_nj = read_nj_ + write_nj_ + writeback_nj_;
  const auto per_bit = [](double nj, std::uint64_t bits) {
    return bits ? nj * 1000.0 / static_cast<double>(bits) : 0.0;
  };
  en.read_pj_per_bit = per_bit(read_nj_, 8 * s.read_bytes);
  en.write_pj_per_bit = per_bit(write_nj_, 8 * s.write_bytes);
  en.writeback_pj_per_bit = per_bit(writeback_nj_, writeback_bits_);
  en.pj_per_bit = per_bit(en.total_nj, 8 * (s.read_bytes + s.write_bytes));

  const TimePs busy_span = drain_end_ - first_arrival_;
  for (const auto& b : bank_busy_) {
    s.bank_utilization.push_back(
        busy_span > 0 ? static_cast<double>(b.finish()) / static_cast<double>(busy_span) : 0.0);
  }

  if (controller_ && config_.backend == BackendKind::Cosmos) {
    const auto& cs = controller_->stats();
    s.holding_buffer_high_water = cs.holding_high_water;
    s.buffer_hits = cs.buffer_hits;
    s.opportunistic_writebacks = cs.opportunistic_writebacks;
    s.forced_writebacks = cs.forced_writebacks;
    s.deferred_requests = deferred_requests_;
    s.min_issue_gap_ns = cs.min_issue_gap >= 0 ? ps_to_ns(cs.min_issue_gap) : 0.0;
  }
  if (out.wear) {
    s.wear = WearSummary{out.wear->max_writes_per_cell, out.wear->mean_writes_per_cell,
                         out.wear->total_cell_writes, out.wear->touched_cells};
    if (span > 0) {
      LifetimeParams lp;
      lp.size_bytes = static_cast<double>(config_.geometry.capacity_bytes());
      lp.max_writes_per_cell = config_.max_writes_per_cell;
      lp.frequency_hz = config_.lifetime_frequency_hz;
      // Delivered bytes per controller clock cycle.
      lp.bytes_per_cycle = s.total_throughput_gbs * 1e9 / lp.frequency_hz;
      s.lifetime_years = lifetime_years(lp);
    }
  }
}

SimulationResult simulate(const SimConfig& config, std::span<const MemoryRequest> trace) {
  Simulator sim(config);
  return sim.run(trace);
}

// ---------------------------------------------------------------------------

namespace {

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

}  // namespace

std::string report_to_json(const StatsReport& s, int indent) {
  ordered_json j;
  j["name"] = s.name;
  j["backend"] = std::string(to_string(s.backend));
  j["trace_fingerprint"] = hex64(s.trace_fingerprint);
  j["requests"] = s.requests;
  j["reads"] = s.reads;
  j["writes"] = s.writes;
  j["read_bytes"] = s.read_bytes;
  j["write_bytes"] = s.write_bytes;
  j["span_ns"] = s.span_ns;
  j["read_throughput_gbs"] = s.read_throughput_gbs;
  j["write_throughput_gbs"] = s.write_throughput_gbs;
  j["total_throughput_gbs"] = s.total_throughput_gbs;
  j["avg_read_latency_ns"] = s.avg_read_latency_ns;
  j["avg_write_latency_ns"] = s.avg_write_latency_ns;
  j["avg_memory_latency_ns"] = s.avg_memory_latency_ns;
  j["max_latency_ns"] = s.max_latency_ns;
  j["energy"] = {
      {"read_nj", s.energy.read_nj},
      {"write_nj", s.energy.write_nj},
      {"writeback_nj", s.energy.writeback_nj},
      {"total_nj", s.energy.total_nj},
      {"read_pj_per_bit", s.energy.read_pj_per_bit},
      {"write_pj_per_bit", s.energy.write_pj_per_bit},
      {"writeback_pj_per_bit", s.energy.writeback_pj_per_bit},
      {"pj_per_bit", s.energy.pj_per_bit},
  };
  j["holding_buffer_high_water"] = s.holding_buffer_high_water;
  j["buffer_hits"] = s.buffer_hits;
  j["opportunistic_writebacks"] = s.opportunistic_writebacks;
  j["forced_writebacks"] = s.forced_writebacks;
  j["deferred_requests"] = s.deferred_requests;
  j["min_issue_gap_ns"] = s.min_issue_gap_ns;
  if (s.wear) {
    j["wear"] = {
        {"max_writes_per_cell", s.wear->max_writes_per_cell},
        {"mean_writes_per_cell", s.wear->mean_writes_per_cell},
        {"total_cell_writes", s.wear->total_cell_writes},
        {"touched_cells", s.wear->touched_cells},
    };
  } else {
    j["wear"] = nullptr;
  }
  j["lifetime_years"] = s.lifetime_years ? ordered_json(*s.lifetime_years) : ordered_json(nullptr);
  j["bank_utilization"] = s.bank_utilization;
  j["drain_end_ns"] = s.drain_end_ns;
  j["events"] = s.events;
  j["warnings"] = s.warnings;
  return j.dump(indent);
}

StatsReport report_from_json(std::string_view text) {
  StatsReport s;
  try {
    const auto j = nlohmann::json::parse(text);
    s.name = j.at("name").get<std::string>();
    s.backend = parse_backend_kind(j.at("backend").get<std::string>());
    s.trace_fingerprint = std::stoull(j.at("trace_fingerprint").get<std::string>(), nullptr, 16);
    s.requests = j.at("requests");
    s.reads = j.at("reads");
    s.writes = j.at("writes");
    s.read_bytes = j.at("read_bytes");
    s.write_bytes = j.at("write_bytes");
    s.span_ns = j.at("span_ns");
    s.read_throughput_gbs = j.at("read_throughput_gbs");
    s.write_throughput_gbs = j.at("write_throughput_gbs");
    s.total_throughput_gbs = j.at("total_throughput_gbs");
    s.avg_read_latency_ns = j.at("avg_read_latency_ns");
    s.avg_write_latency_ns = j.at("avg_write_latency_ns");
    s.avg_memory_latency_ns = j.at("avg_memory_latency_ns");
    s.max_latency_ns = j.at("max_latency_ns");
    const auto& en = j.at("energy");
    s.energy.read_nj = en.at("read_nj");
    s.energy.write_nj = en.at("write_nj");
    s.energy.writeback_nj = en.at("writeback_nj");
    s.energy.total_nj = en.at("total_nj");
    s.energy.read_pj_per_bit = en.at("read_pj_per_bit");
    s.energy.write_pj_per_bit = en.at("write_pj_per_bit");
    s.energy.writeback_pj_per_bit = en.at("writeback_pj_per_bit");
    s.energy.pj_per_bit = en.at("pj_per_bit");
    s.holding_buffer_high_water = j.at("holding_buffer_high_water");
    s.buffer_hits = j.at("buffer_hits");
    s.opportunistic_writebacks = j.at("opportunistic_writebacks");
    s.forced_writebacks = j.at("forced_writebacks");
    s.deferred_requests = j.at("deferred_requests");
    s.min_issue_gap_ns = j.at("min_issue_gap_ns");
    if (const auto& w = j.at("wear"); !w.is_null()) {
      s.wear = WearSummary{w.at("max_writes_per_cell"), w.at("mean_writes_per_cell"),
                           w.at("total_cell_writes"), w.at("touched_cells")};
    }
    if (const auto& y = j.at("lifetime_years"); !y.is_null()) s.lifetime_years = y.get<double>();
    s.bank_utilization = j.at("bank_utilization").get<std::vector<double>>();
    s.drain_end_ns = j.at("drain_end_ns");
    s.events = j.at("events");
    s.warnings = j.at("warnings").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("malformed report: ") + e.what());
  } catch (const std::logic_error& e) {
    throw Error(ErrorCode::ConfigError, std::string("malformed report: ") + e.what());
  }
  return s;
}

std::string report_to_text(const StatsReport& s) {
  std::ostringstream os;
  os << std::fixed;
  const auto row = [&os](std::string_view key, auto value, std::string_view unit, int prec = 3) {
    os << "  " << std::left << std::setw(28) << key << std::right << std::setw(16)
       << std::setprecision(prec) << value << (unit.empty() ? "" : " ") << unit << '\n';
  };
  os << "run " << s.name << " (" << to_string(s.backend) << ", trace " << hex64(s.trace_fingerprint)
     << ")\n";
  row("requests", s.requests, "");
  row("reads", s.reads, "");
  row("writes", s.writes, "");
  row("span", s.span_ns, "ns");
  row("read throughput", s.read_throughput_gbs, "GB/s", 4);
  row("write throughput", s.write_throughput_gbs, "GB/s", 4);
  row("total throughput", s.total_throughput_gbs, "GB/s", 4);
  row("avg read latency", s.avg_read_latency_ns, "ns");
  row("avg write latency", s.avg_write_latency_ns, "ns");
  row("avg memory latency", s.avg_memory_latency_ns, "ns");
  row("max latency", s.max_latency_ns, "ns");
  row("energy read", s.energy.read_nj, "nJ");
  row("energy write", s.energy.write_nj, "nJ");
  row("energy writeback", s.energy.writeback_nj, "nJ");
  row("energy total", s.energy.total_nj, "nJ");
  row("read energy/bit", s.energy.read_pj_per_bit, "pJ/bit");
  row("write energy/bit", s.energy.write_pj_per_bit, "pJ/bit");
  row("writeback energy/bit", s.energy.writeback_pj_per_bit, "pJ/bit");
  row("energy/bit delivered", s.energy.pj_per_bit, "pJ/bit");
  if (s.backend == BackendKind::Cosmos) {
    row("holding high water", s.holding_buffer_high_water, "lines");
    row("buffer hits", s.buffer_hits, "");
    row("opportunistic writebacks", s.opportunistic_writebacks, "");
    row("forced writebacks", s.forced_writebacks, "");
    row("deferred requests", s.deferred_requests, "");
    row("min issue gap", s.min_issue_gap_ns, "ns");
  }
  if (s.wear) {
    row("max writes/cell", s.wear->max_writes_per_cell, "");
    row("mean writes/cell", s.wear->mean_writes_per_cell, "", 6);
    row("touched cells", s.wear->touched_cells, "");
  }
  if (s.lifetime_years) row("lifetime", *s.lifetime_years, "years", 4);
  for (std::size_t b = 0; b < s.bank_utilization.size(); ++b) {
    row("bank " + std::to_string(b) + " utilization", s.bank_utilization[b], "", 4);
  }
  for (const auto& w : s.warnings) os << "  warning: " << w << '\n';
  return os.str();
}

Comparison compare(std::span<const StatsReport> reports) {
  if (reports.size() < 2) throw Error(ErrorCode::ConfigError, "compare needs at least two reports");
  const StatsReport& base = reports.front();
  for (const auto& r : reports) {
    if (r.trace_fingerprint != base.trace_fingerprint) {
      throw Error(ErrorCode::TraceMismatch, "'" + r.name + "' ran a different trace than '" +
                                                base.name + "'");
    }
  }
  const auto ratio = [](double c, double b) { return b > 0 ? c / b : 0.0; };
  Comparison out;
  ordered_json rows = ordered_json::array();
  std::ostringstream os;
  os << std::fixed << std::setprecision(4);
  os << std::left << std::setw(20) << "candidate" << std::setw(20) << "baseline" << std::right
     << std::setw(12) << "rd_thru" << std::setw(12) << "wr_thru" << std::setw(12) << "latency"
     << std::setw(12) << "energy" << "  expectation\n";
  for (std::size_t i = 1; i < reports.size(); ++i) {
    const StatsReport& c = reports[i];
    ComparisonRow row;
    row.baseline = base.name;
    row.candidate = c.name;
    row.read_throughput_ratio = ratio(c.read_throughput_gbs, base.read_throughput_gbs);
    row.write_throughput_ratio = ratio(c.write_throughput_gbs, base.write_throughput_gbs);
    row.latency_ratio = ratio(c.avg_memory_latency_ns, base.avg_memory_latency_ns);
    row.energy_ratio = ratio(c.energy.pj_per_bit, base.energy.pj_per_bit);
    const StatsReport* cosmos = nullptr;
    const StatsReport* epcm = nullptr;
    for (const StatsReport* r : {&base, &c}) {
      if (r->backend == BackendKind::Cosmos) cosmos = r;
      if (r->backend == BackendKind::Epcm) epcm = r;
    }
    if (cosmos && epcm) {
      row.latency_expectation_met = cosmos->avg_memory_latency_ns < epcm->avg_memory_latency_ns;
    }
    os << std::left << std::setw(20) << row.candidate << std::setw(20) << row.baseline
       << std::right << std::setw(12) << row.read_throughput_ratio << std::setw(12)
       << row.write_throughput_ratio << std::setw(12) << row.latency_ratio << std::setw(12)
       << row.energy_ratio << "  ";
    if (row.latency_expectation_met) {
      os << (*row.latency_expectation_met ? "cosmos latency < epcm: yes"
                                          : "cosmos latency < epcm: NO");
    } else {
      os << "-";
    }
    os << '\n';
    rows.push_back({{"candidate", row.candidate},
                    {"baseline", row.baseline},
                    {"read_throughput_ratio", row.read_throughput_ratio},
                    {"write_throughput_ratio", row.write_throughput_ratio},
                    {"latency_ratio", row.latency_ratio},
                    {"energy_ratio", row.energy_ratio},
                    {"latency_expectation_met", row.latency_expectation_met
                                                    ? ordered_json(*row.latency_expectation_met)
                                                    : ordered_json(nullptr)}});
    out.rows.push_back(std::move(row));
  }
  out.text = os.str();
  out.json = rows.dump(2);
  return out;
}

}  // namespace cosmos
