#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace cosmos {

// Text-to-number helpers shared by the config, trace and CLI readers. All
// throw Error{ConfigError} naming `context` on malformed input.

std::string_view trim(std::string_view s);

std::int64_t parse_int(std::string_view text, std::string_view context = "value");
double parse_double(std::string_view text, std::string_view context = "value");
bool parse_bool(std::string_view text, std::string_view context = "value");

// Accepts plain byte counts ("2147483648", "2e9") or binary/decimal suffixes
// ("2GiB", "512MiB", "4KB").
std::uint64_t parse_size(std::string_view text, std::string_view context = "size");

// Hex with or without a 0x prefix.
std::uint64_t parse_hex_u64(std::string_view text, std::string_view context = "hex value");

}  // namespace cosmos
