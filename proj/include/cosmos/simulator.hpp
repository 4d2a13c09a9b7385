#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cosmos/controller.hpp"
#include "cosmos/device_model.hpp"
#include "cosmos/endurance.hpp"
#include "cosmos/geometry.hpp"
#include "cosmos/optics_analysis.hpp"
#include "cosmos/units.hpp"

namespace cosmos {

// Lower value dispatches first at equal timestamps: completions release
// windows and buffer slots before a same-instant issue looks at them.
enum class EventKind : std::uint8_t {
  StepComplete = 0,
  Writeback = 1,
  Issue = 2,
  RequestArrival = 3,
  RunEnd = 4,
};

struct Event {
  TimePs time = 0;
  EventKind kind = EventKind::RunEnd;
  std::uint64_t seq = 0;
  std::uint64_t payload = 0;
};

/// Min-heap on (time, kind, seq). `seq` is assigned on push, so equal
/// (time, kind) events leave in insertion order.
class EventQueue {
 public:
  void push(TimePs time, EventKind kind, std::uint64_t payload = 0);
  Event pop();
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  TimePs now() const { return now_; }
  std::uint64_t dispatched() const { return dispatched_; }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const;
  };
  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  std::uint64_t next_seq_ = 0;
  std::uint64_t dispatched_ = 0;
  TimePs now_ = 0;
};

enum class BackendKind : std::uint8_t { Cosmos, Epcm, FixedDram };

BackendKind parse_backend_kind(std::string_view name);
std::string_view to_string(BackendKind kind);

struct SimConfig {
  std::string name = "run";
  BackendKind backend = BackendKind::Cosmos;
  ArrayGeometry geometry;
  TimingParams timing;
  ParallelismCaps caps;
  TransmissionModel transmission;
  ControllerOptions controller;
  EpcmParams epcm;
  double dram_latency_ns = 40.0;
  EnergyModelParams energy;
  double lifetime_frequency_hz = 1e9;
  double max_writes_per_cell = 1e6;
  bool keep_records = true;
  bool keep_read_data = false;
};

void check_sim_config(const SimConfig& config);

struct RequestRecord {
  std::uint64_t id = 0;
  RequestOp op = RequestOp::Read;
  std::uint64_t address = 0;
  TimePs arrival = 0;
  TimePs issue = 0;
  TimePs complete = 0;
  OpKind served_as = OpKind::Read;
  CacheLine data;  // reads, when SimConfig::keep_read_data
};

struct EnergyTotals {
  double read_nj = 0.0;
  double write_nj = 0.0;
  double writeback_nj = 0.0;
  double total_nj = 0.0;
  double read_pj_per_bit = 0.0;
  double write_pj_per_bit = 0.0;
  double writeback_pj_per_bit = 0.0;
  double pj_per_bit = 0.0;  // total energy over delivered bits
};

struct WearSummary {
  std::uint32_t max_writes_per_cell = 0;
  double mean_writes_per_cell = 0.0;
  std::uint64_t total_cell_writes = 0;
  std::uint64_t touched_cells = 0;
};

struct StatsReport {
  std::string name;
  BackendKind backend = BackendKind::Cosmos;
  std::uint64_t trace_fingerprint = 0;

  std::uint64_t requests = 0;
  std::uint64_t reads = 0;
  std::uint64_t writes = 0;
  std::uint64_t read_bytes = 0;
  std::uint64_t write_bytes = 0;
  double span_ns = 0.0;  // first arrival to last request completion
  double read_throughput_gbs = 0.0;
  double write_throughput_gbs = 0.0;
  double total_throughput_gbs = 0.0;

  double avg_read_latency_ns = 0.0;
  double avg_write_latency_ns = 0.0;
  double avg_memory_latency_ns = 0.0;
  double max_latency_ns = 0.0;

  EnergyTotals energy;

  std::uint32_t holding_buffer_high_water = 0;
  std::uint64_t buffer_hits = 0;
  std::uint64_t opportunistic_writebacks = 0;
  std::uint64_t forced_writebacks = 0;
  std::uint64_t deferred_requests = 0;  // arrived while the request queue was full
  double min_issue_gap_ns = 0.0;

  std::optional<WearSummary> wear;
  std::optional<double> lifetime_years;
  std::vector<double> bank_utilization;
  double drain_end_ns = 0.0;  // last event, including trailing writebacks
  std::uint64_t events = 0;

  std::vector<std::string> warnings;
};

struct SimulationResult {
  StatsReport report;
  std::vector<RequestRecord> records;  // ordered by request id
  std::optional<WearReport> wear;
};

/// One simulation run. Holds the backend state after `run` so callers can
/// inspect the array.
class Simulator {
 public:
  explicit Simulator(SimConfig config);

  SimulationResult run(std::span<const MemoryRequest> trace);

  /// COSMOS backend only; null before the first run or for baselines.
  const Controller* controller() const { return controller_.get(); }
  const SimConfig& config() const { return config_; }

 private:
  struct PerBankBusy {
    TimePs start = 0;
    TimePs end = -1;
    TimePs total = 0;
    void add(TimePs from, TimePs to);
    TimePs finish() const { return total + (end >= start ? end - start : 0); }
  };

  void run_cosmos(std::span<const MemoryRequest> trace, SimulationResult& out);
  void run_baseline(std::span<const MemoryRequest> trace, SimulationResult& out);
  void finish_report(std::span<const MemoryRequest> trace, SimulationResult& out);

  SimConfig config_;
  std::unique_ptr<Controller> controller_;
  std::vector<PerBankBusy> bank_busy_;
  EventQueue events_;
  TimePs first_arrival_ = 0;
  TimePs last_completion_ = 0;
  TimePs drain_end_ = 0;
  double read_nj_ = 0.0;
  double write_nj_ = 0.0;
  double writeback_nj_ = 0.0;
  std::uint64_t writeback_bits_ = 0;
  std::uint64_t deferred_requests_ = 0;
};

SimulationResult simulate(const SimConfig& config, std::span<const MemoryRequest> trace);

/// Stable-key JSON document for a report.
std::string report_to_json(const StatsReport& report, int indent = 2);
std::string report_to_text(const StatsReport& report);

struct ComparisonRow {
  std::string baseline;
  std::string candidate;
  double read_throughput_ratio = 0.0;  // candidate / baseline; 0 when undefined
  double write_throughput_ratio = 0.0;
  double latency_ratio = 0.0;
  double energy_ratio = 0.0;
  // Set for COSMOS-vs-EPCM pairs: COSMOS average latency below EPCM's.
  std::optional<bool> latency_expectation_met;
};

struct Comparison {
  std::vector<ComparisonRow> rows;
  std::string text;
  std::string json;
};

/// Pairs every report with the first one. Throws Error{TraceMismatch} when
/// fingerprints differ and Error{ConfigError} with fewer than two reports.
Comparison compare(std::span<const StatsReport> reports);

StatsReport report_from_json(std::string_view json);

}  // namespace cosmos
