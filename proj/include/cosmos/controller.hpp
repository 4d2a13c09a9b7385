#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cosmos/device_model.hpp"
#include "cosmos/geometry.hpp"
#include "cosmos/opcm_array.hpp"
#include "cosmos/units.hpp"

namespace cosmos {

struct TimingParams {
  double t_set_ns = 160.0;
  double t_reset_ns = 25.0;
  double t_read_ns = 25.0;
  double t_burst_ns = 1.0;
  double t_eoe_ns = 5.0;

  TimePs write_latency() const { return ns_to_ps(t_eoe_ns) + ns_to_ps(t_set_ns); }
  TimePs read_latency() const { return ns_to_ps(t_eoe_ns) + ns_to_ps(t_read_ns); }
};

/// Requires all > 0 and t_eoe <= t_read <= t_set.
void check_timing(const TimingParams& t);

/// Aggregate bit budgets for writes and reads. A window grants `bits` per
/// `ns`; see BitRateWindow for how a single access larger than the window is
/// admitted.
struct ParallelismCaps {
  std::uint64_t write_window_bits = 1024;
  double write_window_ns = 160.0;
  std::uint64_t read_window_bits = 160;
  double read_window_ns = 25.0;
};

void check_caps(const ParallelismCaps& caps);

/// Token bucket of depth `bits` refilled at `bits` per `window`. An access
/// is admitted once the bucket holds min(access bits, depth); admission
/// debits the full access size, so the bucket may go negative. Long-run
/// admitted bits never exceed the window rate.
class BitRateWindow {
 public:
  BitRateWindow(std::uint64_t bits, TimePs window);

  TimePs earliest(TimePs now, std::uint64_t access_bits) const;
  void admit(TimePs now, std::uint64_t access_bits);

  /// Bits debited and not yet refilled at `now` (may exceed depth while in debt).
  double outstanding_bits(TimePs now) const;

  std::uint64_t depth_bits() const { return bits_; }
  TimePs window() const { return window_; }

 private:
  // Credit is held in bit*ps so refill is exact integer arithmetic.
  std::int64_t credit_at(TimePs now) const;

  std::uint64_t bits_;
  TimePs window_;
  std::int64_t credit_;
  TimePs last_ = 0;
};

enum class RequestOp : std::uint8_t { Read, Write };

struct MemoryRequest {
  std::uint64_t id = 0;
  TimePs arrival = 0;
  RequestOp op = RequestOp::Read;
  std::uint64_t address = 0;
  CacheLine data;  // WRITE only

  friend bool operator==(const MemoryRequest&, const MemoryRequest&) = default;
};

enum class CommandKind : std::uint8_t { Activate, Precharge, Refresh, Read, Write };

/// "ACT", "PRE", "REF", "RD", "WR"; anything else throws Error{UnknownCommand}.
CommandKind parse_command_kind(std::string_view mnemonic);

struct DramCommand {
  CommandKind kind = CommandKind::Read;
  std::uint64_t request_id = 0;
  TimePs arrival = 0;
  std::uint64_t address = 0;
  CacheLine data;
};

enum class AcceptResult : std::uint8_t { Queued, NoOp, QueueFull };

enum class OpKind : std::uint8_t { Write, Read, BufferHit, Writeback };

std::string_view to_string(OpKind kind);

struct IssuedOp {
  std::uint64_t op_id = 0;
  OpKind kind = OpKind::Read;
  std::uint64_t request_id = 0;  // unused for writebacks
  std::uint64_t address = 0;
  std::uint32_t bank_group = 0;
  TimePs issue = 0;
  TimePs complete = 0;
  bool forced = false;  // writeback issued under holding-buffer pressure
};

struct Completion {
  IssuedOp op;
  CacheLine data;  // reads: returned line
  std::optional<ReadTranscript> transcript;  // array reads only
};

enum class Disposition : std::uint8_t {
  ServeFromBuffer,     // read hit in the holding buffer
  InvalidateAndWrite,  // write to an address with a buffered (not yet restored) line
  ArrayAccess,
  StallConflict,  // an array access to the same line is still in flight
};

struct ControllerOptions {
  std::uint32_t holding_capacity = 16;
  std::uint32_t queue_capacity = 64;
  // Free-slot watermark below which a pending read forces writebacks; 0 = derived.
  std::uint32_t drain_reserve = 0;
  // Relative amplitude of uniform read-intensity noise; 0 disables it.
  double read_noise = 0.0;
  std::uint64_t noise_seed = 1;
  bool keep_transcripts = false;
};

struct HoldingEntry {
  std::uint64_t address = 0;
  CacheLine data;
  bool valid = true;
  bool under_writeback = false;
};

struct ControllerStats {
  std::uint64_t activate_noops = 0;
  std::uint64_t precharge_noops = 0;
  std::uint64_t refresh_noops = 0;
  std::uint64_t queue_full_rejections = 0;
  std::uint64_t array_writes = 0;
  std::uint64_t array_reads = 0;
  std::uint64_t buffer_hits = 0;
  std::uint64_t invalidations = 0;
  std::uint64_t opportunistic_writebacks = 0;
  std::uint64_t forced_writebacks = 0;
  std::uint32_t holding_high_water = 0;
  std::uint64_t issues = 0;
  TimePs min_issue_gap = -1;  // -1 until two issues happened
};

/// Electrical-optical-electrical control unit for one channel.
///
/// Requests are held in the row/column address queues and the data buffer
/// and leave strictly in arrival order. Reads are destructive; their data
/// parks in the holding buffer until written back, opportunistically when
/// the queues are empty or forced when a pending read runs short of slots.
/// All mutation happens through accept/issue_ready/complete, driven by the
/// simulation engine's single thread.
class Controller {
 public:
  Controller(const ArrayGeometry& geom, const TimingParams& timing, const ParallelismCaps& caps,
             const TransmissionModel& transmission, const ControllerOptions& options = {});

  AcceptResult accept(const DramCommand& cmd, TimePs now);

  /// Issues whatever is issuable at `now` (at most one op per t_EOE slot).
  std::vector<IssuedOp> issue_ready(TimePs now);

  /// Earliest time a retry of issue_ready could make progress without an
  /// intervening completion; empty when only a completion can unblock.
  std::optional<TimePs> next_wakeup() const { return wakeup_; }

  Completion complete(std::uint64_t op_id, TimePs now);

  Disposition hazard_check(const MemoryRequest& req) const;

  bool queues_empty() const { return row_queue_.empty(); }
  bool quiescent() const { return row_queue_.empty() && in_flight_.empty() && holding_.empty(); }
  std::size_t queue_depth() const { return row_queue_.size(); }
  std::uint32_t holding_occupancy() const;
  const std::deque<HoldingEntry>& holding_buffer() const { return holding_; }
  std::size_t in_flight_count() const { return in_flight_.size(); }
  std::uint32_t drain_reserve() const { return drain_reserve_; }

  double in_flight_write_bits(TimePs now) const { return write_window_.outstanding_bits(now); }
  double in_flight_read_bits(TimePs now) const { return read_window_.outstanding_bits(now); }

  const ControllerStats& stats() const { return stats_; }
  const OpcmArray& array() const { return array_; }
  const TimingParams& timing() const { return timing_; }
  const ArrayGeometry& geometry() const { return geom_; }

 private:
  struct RowAddressEntry {
    std::uint64_t request_id;
    std::uint32_t tile_row;
    std::uint32_t cell_row;
  };
  struct ColumnAddressEntry {
    std::uint64_t request_id;
    RequestOp op;
    TimePs arrival;
    std::uint32_t bank_group;
    std::uint32_t tile_col;
  };
  struct DataEntry {
    std::uint64_t request_id;
    CacheLine data;
  };
  struct InFlight {
    IssuedOp op;
    CacheLine data;  // write payload, writeback payload, or buffer-hit copy
  };

  MemoryRequest head_request() const;
  std::deque<HoldingEntry>::iterator find_entry(std::uint64_t address);
  std::deque<HoldingEntry>::const_iterator find_entry(std::uint64_t address) const;
  bool conflicts(std::uint64_t address) const;
  std::uint32_t projected_free_slots() const;
  void pop_head();
  IssuedOp start(OpKind kind, std::uint64_t request_id, std::uint64_t address, TimePs now,
                 TimePs latency, CacheLine data, bool forced = false);
  std::optional<IssuedOp> try_issue_head(TimePs now, std::optional<TimePs>& wake);
  std::optional<IssuedOp> try_writeback(TimePs now, bool forced, std::optional<TimePs>& wake);
  void note_wake(std::optional<TimePs>& wake, TimePs t) const;
  void track_high_water();

  ArrayGeometry geom_;
  TimingParams timing_;
  ParallelismCaps caps_;
  ControllerOptions options_;
  OpcmArray array_;
  BitRateWindow write_window_;
  BitRateWindow read_window_;
  std::mt19937_64 noise_rng_;
  std::uint32_t drain_reserve_ = 0;

  std::deque<RowAddressEntry> row_queue_;
  std::deque<ColumnAddressEntry> column_queue_;
  std::deque<DataEntry> data_buffer_;
  std::deque<HoldingEntry> holding_;  // oldest first
  std::unordered_map<std::uint64_t, InFlight> in_flight_;
  std::unordered_map<std::uint64_t, std::uint32_t> array_ops_by_address_;
  std::uint32_t reads_in_flight_ = 0;

  TimePs next_issue_time_ = 0;
  std::optional<TimePs> last_issue_;
  std::optional<TimePs> wakeup_;
  std::uint64_t next_op_id_ = 1;
  ControllerStats stats_;
};

}  // namespace cosmos
