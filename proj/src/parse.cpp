#include "cosmos/parse.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <utility>

#include "cosmos/error.hpp"

namespace cosmos {

namespace {

[[noreturn]] void bad(std::string_view context, std::string_view text, std::string_view what) {
  throw Error(ErrorCode::ConfigError, std::string(context) + ": '" + std::string(text) +
                                          "' is not " + std::string(what));
}

}  // namespace

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::int64_t parse_int(std::string_view text, std::string_view context) {
  const auto t = trim(text);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec == std::errc() && ptr == t.data() + t.size() && !t.empty()) return v;
  // Allow integral scientific notation such as 1e6.
  const double d = parse_double(t, context);
  if (std::floor(d) != d || std::abs(d) > 9.0e18) bad(context, text, "an integer");
  return static_cast<std::int64_t>(d);
}

double parse_double(std::string_view text, std::string_view context) {
  const auto t = trim(text);
  if (t.empty()) bad(context, text, "a number");
  std::string buf(t);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(buf, &used);
  } catch (const std::exception&) {
    bad(context, text, "a number");
  }
  if (used != buf.size() || !std::isfinite(v)) bad(context, text, "a finite number");
  return v;
}

bool parse_bool(std::string_view text, std::string_view context) {
  const auto t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  bad(context, text, "a boolean");
}

std::uint64_t parse_size(std::string_view text, std::string_view context) {
  static constexpr std::array<std::pair<std::string_view, double>, 8> kSuffixes{{
      {"KiB", 1024.0},
      {"MiB", 1024.0 * 1024.0},
      {"GiB", 1024.0 * 1024.0 * 1024.0},
      {"TiB", 1024.0 * 1024.0 * 1024.0 * 1024.0},
      {"KB", 1e3},
      {"MB", 1e6},
      {"GB", 1e9},
      {"B", 1.0},
  }};
  auto t = trim(text);
  double scale = 1.0;
  for (const auto& [suffix, factor] : kSuffixes) {
    if (t.size() > suffix.size() && t.ends_with(suffix)) {
      t = trim(t.substr(0, t.size() - suffix.size()));
      scale = factor;
      break;
    }
  }
  const double v = parse_double(t, context) * scale;
  if (v < 0 || std::floor(v) != v || v > 1.8e19) bad(context, text, "a whole byte count");
  return static_cast<std::uint64_t>(v);
}

std::uint64_t parse_hex_u64(std::string_view text, std::string_view context) {
  auto t = trim(text);
  if (t.starts_with("0x") || t.starts_with("0X")) t.remove_prefix(2);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v, 16);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    bad(context, text, "a hexadecimal number");
  }
  return v;
}

}  // namespace cosmos
