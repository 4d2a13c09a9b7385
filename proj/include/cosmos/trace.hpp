#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cosmos/controller.hpp"
#include "cosmos/geometry.hpp"

namespace cosmos {

// Trace text format, one request per line:
//   <time_ns> <R|W> <hex_address> [<hex_data>]
// `#` starts a comment line. A write without data receives a payload derived
// from (payload_seed, request id, address).

struct TraceOptions {
  std::uint32_t cacheline_bytes = 64;
  std::uint64_t payload_seed = 0;
};

struct LoadedTrace {
  std::vector<MemoryRequest> requests;  // sorted by arrival; ids follow file order
  std::vector<std::string> warnings;
};

LoadedTrace load_trace(std::istream& in, const TraceOptions& options = {});
LoadedTrace load_trace_file(const std::string& path, const TraceOptions& options = {});

void write_trace(std::ostream& out, std::span<const MemoryRequest> requests);

CacheLine derived_payload(std::uint64_t seed, std::uint64_t request_id, std::uint64_t address,
                          std::uint32_t bytes);

/// FNV-1a over arrival, op, address and payload of every request.
std::uint64_t trace_fingerprint(std::span<const MemoryRequest> requests);

enum class TracePattern { SaturateWrite, SaturateRead, Mixed, Random };

TracePattern parse_trace_pattern(std::string_view name);
std::string_view to_string(TracePattern pattern);

struct TraceGenOptions {
  TracePattern pattern = TracePattern::SaturateWrite;
  std::uint64_t length = 0;
  std::uint64_t seed = 1;
  double read_fraction = 0.67;  // Mixed only
  // Inter-arrival gap; defaults to 0 for saturating patterns, 100 ns otherwise.
  std::optional<double> gap_ns;
  // Restrict addresses to the first `address_lines` lines; 0 = whole array.
  std::uint64_t address_lines = 0;
};

std::vector<MemoryRequest> gen_trace(const TraceGenOptions& options, const ArrayGeometry& geom);

/// SplitMix64 stream; used wherever output must be reproducible across
/// standard-library implementations.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform integer in [0, bound), bound > 0.
  std::uint64_t below(std::uint64_t bound);
  double unit();  // [0, 1)

 private:
  std::uint64_t state_;
};

}  // namespace cosmos
