#include "cosmos/trace.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "cosmos/error.hpp"
#include "cosmos/parse.hpp"

namespace cosmos {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::below(std::uint64_t bound) {
  // Rejection sampling keeps the draw unbiased.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t v = next();
  while (v >= limit) v = next();
  return v % bound;
}

double SplitMix64::unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

CacheLine derived_payload(std::uint64_t seed, std::uint64_t request_id, std::uint64_t address,
                          std::uint32_t bytes) {
  SplitMix64 rng(seed ^ (request_id * 0xD1B54A32D192ED03ull) ^ (address * 0x9E3779B97F4A7C15ull));
  CacheLine line(bytes);
  for (std::uint32_t i = 0; i < bytes; i += 8) {
    const std::uint64_t word = rng.next();
    for (std::uint32_t j = 0; j < 8 && i + j < bytes; ++j) {
      line[i + j] = static_cast<std::uint8_t>(word >> (8 * j));
    }
  }
  return line;
}

namespace {

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

CacheLine parse_payload(std::string_view hex, std::uint32_t bytes, std::size_t lineno) {
  if (hex.size() != 2 * static_cast<std::size_t>(bytes)) {
    throw ParseError(lineno, "write data must be " + std::to_string(2 * bytes) +
                                 " hex characters, got " + std::to_string(hex.size()));
  }
  CacheLine line(bytes);
  for (std::uint32_t i = 0; i < bytes; ++i) {
    const int hi = hex_digit(hex[2 * i]);
    const int lo = hex_digit(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw ParseError(lineno, "write data is not hexadecimal");
    line[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return line;
}

void append_time(std::ostream& out, TimePs t) {
  out << t / kPsPerNs;
  if (const TimePs frac = t % kPsPerNs; frac != 0) {
    const char digits[] = {static_cast<char>('0' + frac / 100), static_cast<char>('0' + frac / 10 % 10),
                           static_cast<char>('0' + frac % 10)};
    std::string_view s(digits, 3);
    while (s.ends_with('0')) s.remove_suffix(1);
    out << '.' << s;
  }
}

}  // namespace

LoadedTrace load_trace(std::istream& in, const TraceOptions& options) {
  LoadedTrace out;
  std::string line;
  std::size_t lineno = 0;
  bool monotonic = true;
  TimePs last = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    std::istringstream fields{std::string(text)};
    std::string time_s, op_s, addr_s, data_s, extra;
    fields >> time_s >> op_s >> addr_s;
    if (addr_s.empty()) throw ParseError(lineno, "expected '<time_ns> <R|W> <hex_address>'");
    fields >> data_s >> extra;
    if (!extra.empty()) throw ParseError(lineno, "unexpected trailing field '" + extra + "'");

    MemoryRequest req;
    req.id = out.requests.size();
    try {
      const double ns = parse_double(time_s, "time");
      if (ns < 0) throw ParseError(lineno, "negative time");
      req.arrival = ns_to_ps(ns);
      req.address = parse_hex_u64(addr_s, "address");
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(lineno, e.what());
    }
    if (op_s == "R" || op_s == "r") {
      req.op = RequestOp::Read;
      if (!data_s.empty()) throw ParseError(lineno, "read carries data");
    } else if (op_s == "W" || op_s == "w") {
      req.op = RequestOp::Write;
      req.data = data_s.empty() ? derived_payload(options.payload_seed, req.id, req.address,
                                                  options.cacheline_bytes)
                                : parse_payload(data_s, options.cacheline_bytes, lineno);
    } else {
      throw ParseError(lineno, "operation must be R or W, got '" + op_s + "'");
    }
    if (!out.requests.empty() && req.arrival < last && monotonic) {
      monotonic = false;
      out.warnings.push_back("line " + std::to_string(lineno) +
                             ": arrival time goes backwards; trace will be stable-sorted");
    }
    last = req.arrival;
    out.requests.push_back(std::move(req));
  }
  if (!monotonic) {
    std::stable_sort(out.requests.begin(), out.requests.end(),
                     [](const MemoryRequest& a, const MemoryRequest& b) {
                       return a.arrival < b.arrival;
                     });
  }
  return out;
}

LoadedTrace load_trace_file(const std::string& path, const TraceOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open trace '" + path + "'");
  return load_trace(in, options);
}

void write_trace(std::ostream& out, std::span<const MemoryRequest> requests) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string buf;
  for (const auto& r : requests) {
    append_time(out, r.arrival);
    out << (r.op == RequestOp::Read ? " R 0x" : " W 0x");
    char addr[17];
    int len = 0;
    std::uint64_t a = r.address;
    do {
      addr[len++] = kHex[a & 0xF];
      a >>= 4;
    } while (a != 0);
    std::reverse(addr, addr + len);
    out.write(addr, len);
    if (r.op == RequestOp::Write) {
      buf.resize(r.data.size() * 2);
      for (std::size_t i = 0; i < r.data.size(); ++i) {
        buf[2 * i] = kHex[r.data[i] >> 4];
        buf[2 * i + 1] = kHex[r.data[i] & 0xF];
      }
      out << ' ' << buf;
    }
    out << '\n';
  }
}

std::uint64_t trace_fingerprint(std::span<const MemoryRequest> requests) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xFF;
      h *= 0x100000001b3ull;
    }
  };
  mix(requests.size());
  for (const auto& r : requests) {
    mix(static_cast<std::uint64_t>(r.arrival));
    mix(static_cast<std::uint64_t>(r.op));
    mix(r.address);
    for (auto b : r.data) {
      h ^= b;
      h *= 0x100000001b3ull;
    }
  }
  return h;
}

TracePattern parse_trace_pattern(std::string_view name) {
  if (name == "saturate-w" || name == "saturate_w") return TracePattern::SaturateWrite;
  if (name == "saturate-r" || name == "saturate_r") return TracePattern::SaturateRead;
  if (name == "mixed") return TracePattern::Mixed;
  if (name == "random") return TracePattern::Random;
  throw Error(ErrorCode::ConfigError, "unknown trace pattern '" + std::string(name) +
                                          "' (saturate-w, saturate-r, mixed, random)");
}

std::string_view to_string(TracePattern pattern) {
  switch (pattern) {
    case TracePattern::SaturateWrite: return "saturate-w";
    case TracePattern::SaturateRead: return "saturate-r";
    case TracePattern::Mixed: return "mixed";
    case TracePattern::Random: return "random";
  }
  return "?";
}

std::vector<MemoryRequest> gen_trace(const TraceGenOptions& o, const ArrayGeometry& geom) {
  check_geometry(geom);
  if (o.length == 0) throw Error(ErrorCode::NonPositiveInput, "trace length must be > 0");
  if (o.pattern == TracePattern::Mixed && !(o.read_fraction >= 0.0 && o.read_fraction <= 1.0)) {
    throw Error(ErrorCode::ConfigError, "read fraction must be in [0, 1]");
  }
  const bool saturating =
      o.pattern == TracePattern::SaturateWrite || o.pattern == TracePattern::SaturateRead;
  const double gap_ns = o.gap_ns.value_or(saturating ? 0.0 : 100.0);
  if (gap_ns < 0) throw Error(ErrorCode::ConfigError, "gap must be >= 0");
  const std::uint64_t lines =
      o.address_lines != 0 ? std::min(o.address_lines, geom.line_count()) : geom.line_count();

  SplitMix64 rng(o.seed);
  std::vector<RequestOp> ops(o.length, RequestOp::Write);
  switch (o.pattern) {
    case TracePattern::SaturateWrite:
      break;
    case TracePattern::SaturateRead:
      std::fill(ops.begin(), ops.end(), RequestOp::Read);
      break;
    case TracePattern::Mixed: {
      const auto reads = static_cast<std::uint64_t>(
          std::llround(o.read_fraction * static_cast<double>(o.length)));
      std::fill_n(ops.begin(), reads, RequestOp::Read);
      for (std::uint64_t i = o.length - 1; i > 0; --i) std::swap(ops[i], ops[rng.below(i + 1)]);
      break;
    }
    case TracePattern::Random:
      for (auto& op : ops) op = (rng.next() & 1) ? RequestOp::Read : RequestOp::Write;
      break;
  }

  std::vector<MemoryRequest> trace;
  trace.reserve(o.length);
  for (std::uint64_t i = 0; i < o.length; ++i) {
    MemoryRequest r;
    r.id = i;
    r.arrival = ns_to_ps(gap_ns * static_cast<double>(i));
    r.op = ops[i];
    const std::uint64_t line = saturating ? i % lines : rng.below(lines);
    r.address = line * geom.cacheline_bytes;
    if (r.op == RequestOp::Write) r.data = derived_payload(o.seed, i, r.address, geom.cacheline_bytes);
    trace.push_back(std::move(r));
  }
  return trace;
}

}  // namespace cosmos
