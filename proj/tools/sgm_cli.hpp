#pragma once

#include <cstdint>
#include <ostream>
#include <string>

namespace sgm::cli {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int { ok = 0, usage = 2, numerical = 3, partial = 4 };

/// Entry point of the `sgm` tool. Standard output of the subcommands goes to
/// `out` unless redirected with --output; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// 64-bit FNV-1a, used for the config hash in output trailers.
std::uint64_t fnv1a(const std::string& text);

}  // namespace sgm::cli
