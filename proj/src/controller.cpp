#include "cosmos/controller.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cosmos/error.hpp"

namespace cosmos {

void check_timing(const TimingParams& t) {
  if (!(t.t_set_ns > 0 && t.t_reset_ns > 0 && t.t_read_ns > 0 && t.t_burst_ns > 0 &&
        t.t_eoe_ns > 0)) {
    throw Error(ErrorCode::ConfigError, "all timing parameters must be > 0");
  }
  if (!(t.t_eoe_ns <= t.t_read_ns && t.t_read_ns <= t.t_set_ns)) {
    throw Error(ErrorCode::ConfigError, "timing must satisfy t_eoe <= t_read <= t_set");
  }
}

void check_caps(const ParallelismCaps& c) {
  if (c.write_window_bits == 0 || c.read_window_bits == 0 || !(c.write_window_ns > 0) ||
      !(c.read_window_ns > 0)) {
    throw Error(ErrorCode::ConfigError, "parallelism windows must be > 0");
  }
}

// ---------------------------------------------------------------------------

BitRateWindow::BitRateWindow(std::uint64_t bits, TimePs window)
    : bits_(bits), window_(window), credit_(static_cast<std::int64_t>(bits) * window) {
  if (bits == 0 || window <= 0) throw Error(ErrorCode::ConfigError, "empty bit-rate window");
}

std::int64_t BitRateWindow::credit_at(TimePs now) const {
  const std::int64_t full = static_cast<std::int64_t>(bits_) * window_;
  const TimePs dt = std::max<TimePs>(0, now - last_);
  // Saturating refill: once dt covers the gap the bucket is simply full.
  const std::int64_t gap = full - credit_;
  if (dt >= (gap + static_cast<std::int64_t>(bits_) - 1) / static_cast<std::int64_t>(bits_)) {
    return full;
  }
  return credit_ + dt * static_cast<std::int64_t>(bits_);
}

TimePs BitRateWindow::earliest(TimePs now, std::uint64_t access_bits) const {
  const std::int64_t need =
      static_cast<std::int64_t>(std::min(access_bits, bits_)) * window_;
  const std::int64_t have = credit_at(now);
  if (have >= need) return now;
  const auto rate = static_cast<std::int64_t>(bits_);
  return now + (need - have + rate - 1) / rate;
}

void BitRateWindow::admit(TimePs now, std::uint64_t access_bits) {
  if (earliest(now, access_bits) > now) {
    throw Error(ErrorCode::WindowFull, "access admitted before window headroom");
  }
  credit_ = credit_at(now) - static_cast<std::int64_t>(access_bits) * window_;
  last_ = now;
}

double BitRateWindow::outstanding_bits(TimePs now) const {
  const std::int64_t full = static_cast<std::int64_t>(bits_) * window_;
  return static_cast<double>(full - credit_at(now)) / static_cast<double>(window_);
}

// ---------------------------------------------------------------------------

CommandKind parse_command_kind(std::string_view m) {
  if (m == "ACT") return CommandKind::Activate;
  if (m == "PRE") return CommandKind::Precharge;
  if (m == "REF") return CommandKind::Refresh;
  if (m == "RD") return CommandKind::Read;
  if (m == "WR") return CommandKind::Write;
  throw Error(ErrorCode::UnknownCommand, "'" + std::string(m) + "'");
}

std::string_view to_string(OpKind kind) {
  switch (kind) {
    case OpKind::Write: return "write";
    case OpKind::Read: return "read";
    case OpKind::BufferHit: return "buffer-hit";
    case OpKind::Writeback: return "writeback";
  }
  return "?";
}

Controller::Controller(const ArrayGeometry& geom, const TimingParams& timing,
                       const ParallelismCaps& caps, const TransmissionModel& transmission,
                       const ControllerOptions& options)
    : geom_(geom),
      timing_(timing),
      caps_(caps),
      options_(options),
      array_(geom, transmission),
      write_window_(caps.write_window_bits, ns_to_ps(caps.write_window_ns)),
      read_window_(caps.read_window_bits, ns_to_ps(caps.read_window_ns)),
      noise_rng_(options.noise_seed) {
  check_timing(timing_);
  check_caps(caps_);
  if (options_.holding_capacity == 0) {
    throw Error(ErrorCode::ConfigError, "holding buffer needs at least one slot");
  }
  if (options_.queue_capacity == 0) throw Error(ErrorCode::ConfigError, "queue capacity is 0");
  if (!(options_.read_noise >= 0.0 && options_.read_noise < 0.5)) {
    throw Error(ErrorCode::ConfigError, "read noise amplitude must be in [0, 0.5)");
  }

  drain_reserve_ = options_.drain_reserve;
  if (drain_reserve_ == 0) {
    // Enough slots to cover the reads that can issue while one writeback is
    // in flight, plus one.
    const double line_read_ns = static_cast<double>(geom_.line_bits()) * caps_.read_window_ns /
                                static_cast<double>(caps_.read_window_bits);
    const double interval = std::max(line_read_ns, timing_.t_eoe_ns);
    drain_reserve_ = static_cast<std::uint32_t>(
        std::ceil((timing_.t_eoe_ns + timing_.t_set_ns) / interval) + 1);
  }
  drain_reserve_ = std::min(drain_reserve_, options_.holding_capacity);
}

AcceptResult Controller::accept(const DramCommand& cmd, [[maybe_unused]] TimePs now) {
  switch (cmd.kind) {
    case CommandKind::Activate: ++stats_.activate_noops; return AcceptResult::NoOp;
    case CommandKind::Precharge: ++stats_.precharge_noops; return AcceptResult::NoOp;
    case CommandKind::Refresh: ++stats_.refresh_noops; return AcceptResult::NoOp;
    case CommandKind::Read:
    case CommandKind::Write: break;
  }
  if (row_queue_.size() >= options_.queue_capacity) {
    ++stats_.queue_full_rejections;
    return AcceptResult::QueueFull;
  }
  const bool is_write = cmd.kind == CommandKind::Write;
  if (is_write != !cmd.data.empty() || (is_write && cmd.data.size() != geom_.cacheline_bytes)) {
    throw Error(ErrorCode::OutOfRange, "request " + std::to_string(cmd.request_id) +
                                           ": write data must be exactly one cache line and "
                                           "reads carry none");
  }
  const DecodedAddress d = decode_address(cmd.address, geom_);
  row_queue_.push_back({cmd.request_id, d.tile_row, d.cell_row});
  column_queue_.push_back({cmd.request_id, is_write ? RequestOp::Write : RequestOp::Read,
                           cmd.arrival, d.bank_group, d.tile_col});
  if (is_write) data_buffer_.push_back({cmd.request_id, cmd.data});
  return AcceptResult::Queued;
}

MemoryRequest Controller::head_request() const {
  const auto& row = row_queue_.front();
  const auto& col = column_queue_.front();
  MemoryRequest req;
  req.id = col.request_id;
  req.arrival = col.arrival;
  req.op = col.op;
  req.address = encode_address({col.bank_group, row.tile_row, col.tile_col, row.cell_row}, geom_);
  if (req.op == RequestOp::Write) req.data = data_buffer_.front().data;
  return req;
}

void Controller::pop_head() {
  if (column_queue_.front().op == RequestOp::Write) data_buffer_.pop_front();
  row_queue_.pop_front();
  column_queue_.pop_front();
}

std::deque<HoldingEntry>::iterator Controller::find_entry(std::uint64_t address) {
  return std::find_if(holding_.begin(), holding_.end(),
                      [&](const HoldingEntry& e) { return e.valid && e.address == address; });
}

std::deque<HoldingEntry>::const_iterator Controller::find_entry(std::uint64_t address) const {
  return std::find_if(holding_.begin(), holding_.end(),
                      [&](const HoldingEntry& e) { return e.valid && e.address == address; });
}

bool Controller::conflicts(std::uint64_t address) const {
  return array_ops_by_address_.contains(address);
}

std::uint32_t Controller::holding_occupancy() const {
  return static_cast<std::uint32_t>(holding_.size()) + reads_in_flight_;
}

std::uint32_t Controller::projected_free_slots() const {
  const auto draining = static_cast<std::uint32_t>(
      std::count_if(holding_.begin(), holding_.end(),
                    [](const HoldingEntry& e) { return e.under_writeback; }));
  const std::uint32_t committed = holding_occupancy() - draining;
  return committed >= options_.holding_capacity ? 0 : options_.holding_capacity - committed;
}

void Controller::track_high_water() {
  stats_.holding_high_water = std::max(stats_.holding_high_water, holding_occupancy());
}

void Controller::note_wake(std::optional<TimePs>& wake, TimePs t) const {
  if (!wake || t < *wake) wake = t;
}

Disposition Controller::hazard_check(const MemoryRequest& req) const {
  const bool buffered = find_entry(req.address) != holding_.end();
  if (req.op == RequestOp::Read) {
    if (buffered) return Disposition::ServeFromBuffer;
    return conflicts(req.address) ? Disposition::StallConflict : Disposition::ArrayAccess;
  }
  if (conflicts(req.address)) return Disposition::StallConflict;
  return buffered ? Disposition::InvalidateAndWrite : Disposition::ArrayAccess;
}

IssuedOp Controller::start(OpKind kind, std::uint64_t request_id, std::uint64_t address,
                           TimePs now, TimePs latency, CacheLine data, bool forced) {
  IssuedOp op;
  op.op_id = next_op_id_++;
  op.kind = kind;
  op.request_id = request_id;
  op.address = address;
  op.bank_group = decode_address(address, geom_).bank_group;
  op.issue = now;
  op.complete = now + latency;
  op.forced = forced;
  if (kind != OpKind::BufferHit) ++array_ops_by_address_[address];
  in_flight_.emplace(op.op_id, InFlight{op, std::move(data)});

  if (last_issue_) {
    const TimePs gap = now - *last_issue_;
    if (stats_.min_issue_gap < 0 || gap < stats_.min_issue_gap) stats_.min_issue_gap = gap;
  }
  last_issue_ = now;
  ++stats_.issues;
  next_issue_time_ = now + ns_to_ps(timing_.t_eoe_ns);
  return op;
}

std::optional<IssuedOp> Controller::try_issue_head(TimePs now, std::optional<TimePs>& wake) {
  if (row_queue_.empty()) return std::nullopt;
  MemoryRequest req = head_request();
  const Disposition disposition = hazard_check(req);

  switch (disposition) {
    case Disposition::StallConflict:
      return std::nullopt;

    case Disposition::ServeFromBuffer: {
      CacheLine copy = find_entry(req.address)->data;
      pop_head();
      ++stats_.buffer_hits;
      return start(OpKind::BufferHit, req.id, req.address, now, ns_to_ps(timing_.t_eoe_ns),
                   std::move(copy));
    }

    case Disposition::InvalidateAndWrite:
    case Disposition::ArrayAccess:
      break;
  }

  if (req.op == RequestOp::Write) {
    const TimePs ready = write_window_.earliest(now, geom_.line_bits());
    if (ready > now) {
      note_wake(wake, ready);
      return std::nullopt;
    }
    if (disposition == Disposition::InvalidateAndWrite) {
      holding_.erase(find_entry(req.address));
      ++stats_.invalidations;
    }
    write_window_.admit(now, geom_.line_bits());
    pop_head();
    return start(OpKind::Write, req.id, req.address, now, timing_.write_latency(),
                 std::move(req.data));
  }

  if (holding_occupancy() >= options_.holding_capacity) return std::nullopt;
  const TimePs ready = read_window_.earliest(now, geom_.line_bits());
  if (ready > now) {
    note_wake(wake, ready);
    return std::nullopt;
  }
  read_window_.admit(now, geom_.line_bits());
  pop_head();
  ++reads_in_flight_;
  track_high_water();
  return start(OpKind::Read, req.id, req.address, now, timing_.read_latency(), {});
}

std::optional<IssuedOp> Controller::try_writeback(TimePs now, bool forced,
                                                  std::optional<TimePs>& wake) {
  auto it = std::find_if(holding_.begin(), holding_.end(), [&](const HoldingEntry& e) {
    return e.valid && !e.under_writeback && !conflicts(e.address);
  });
  if (it == holding_.end()) return std::nullopt;
  const TimePs ready = write_window_.earliest(now, geom_.line_bits());
  if (ready > now) {
    note_wake(wake, ready);
    return std::nullopt;
  }
  write_window_.admit(now, geom_.line_bits());
  it->under_writeback = true;
  if (forced) {
    ++stats_.forced_writebacks;
  } else {
    ++stats_.opportunistic_writebacks;
  }
  return start(OpKind::Writeback, 0, it->address, now, timing_.write_latency(), it->data, forced);
}

std::vector<IssuedOp> Controller::issue_ready(TimePs now) {
  std::vector<IssuedOp> issued;
  std::optional<TimePs> wake;
  const auto has_writeback_candidate = [&] {
    return std::any_of(holding_.begin(), holding_.end(),
                       [](const HoldingEntry& e) { return e.valid && !e.under_writeback; });
  };

  if (now < next_issue_time_) {
    if (!row_queue_.empty() || has_writeback_candidate()) wake = next_issue_time_;
    wakeup_ = wake;
    return issued;
  }

  std::optional<IssuedOp> op = try_issue_head(now, wake);
  if (!op) {
    if (row_queue_.empty()) {
      op = try_writeback(now, false, wake);
    } else {
      const MemoryRequest head = head_request();
      if (head.op == RequestOp::Read && hazard_check(head) == Disposition::ArrayAccess &&
          projected_free_slots() < drain_reserve_) {
        op = try_writeback(now, true, wake);
      }
    }
  }
  if (op) {
    issued.push_back(*op);
    if (!row_queue_.empty() || has_writeback_candidate()) note_wake(wake, next_issue_time_);
  }
  wakeup_ = wake;
  return issued;
}

Completion Controller::complete(std::uint64_t op_id, [[maybe_unused]] TimePs now) {
  auto node = in_flight_.extract(op_id);
  if (node.empty()) {
    throw Error(ErrorCode::OutOfRange, "no in-flight operation " + std::to_string(op_id));
  }
  InFlight flight = std::move(node.mapped());
  Completion done{flight.op, {}, std::nullopt};
  const DecodedAddress where = decode_address(flight.op.address, geom_);

  switch (flight.op.kind) {
    case OpKind::Write:
      array_.write_line(where, flight.data);
      ++stats_.array_writes;
      break;
    case OpKind::Read: {
      ReadTranscript rt = array_.read_line(where, options_.read_noise, &noise_rng_);
      --reads_in_flight_;
      holding_.push_back({flight.op.address, rt.data, true, false});
      done.data = rt.data;
      if (options_.keep_transcripts) done.transcript = std::move(rt);
      ++stats_.array_reads;
      break;
    }
    case OpKind::Writeback: {
      auto it = std::find_if(holding_.begin(), holding_.end(), [&](const HoldingEntry& e) {
        return e.under_writeback && e.address == flight.op.address;
      });
      if (it == holding_.end()) {
        throw Error(ErrorCode::OutOfRange, "writeback completed without a holding entry");
      }
      array_.write_line(where, it->data);
      holding_.erase(it);
      break;
    }
    case OpKind::BufferHit:
      done.data = std::move(flight.data);
      break;
  }

  if (flight.op.kind != OpKind::BufferHit) {
    auto it = array_ops_by_address_.find(flight.op.address);
    if (--it->second == 0) array_ops_by_address_.erase(it);
  }
  return done;
}

}  // namespace cosmos
