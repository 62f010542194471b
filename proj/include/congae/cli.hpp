#pragma once

#include <iosfwd>

namespace congae {

inline constexpr const char* kToolVersion = "0.1.0";

/// Entry point of the `congae` tool. Returns the process exit status:
/// 0 success, 1 usage or configuration error, 2 data error, 3 numeric failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace congae
