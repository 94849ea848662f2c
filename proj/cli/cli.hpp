#pragma once

#include <iosfwd>

namespace convexsum::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes: 0 success, 2 validation failure, 1 error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace convexsum::cli
