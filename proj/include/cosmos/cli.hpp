#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cosmos {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitDeviation = 2;

/// Entry point for the `cosmos` tool. Returns the process exit status:
/// 0 success, 1 config/parse/runtime error, 2 published-value deviation
/// beyond tolerance under --strict.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Writes `content` to `path` via a sibling temporary file and rename, so a
/// reader never observes a partial file.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace cosmos
