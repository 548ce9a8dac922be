#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qpack {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int verification_failed = 1;
inline constexpr int missing_ingredient = 2;
inline constexpr int budget_exceeded = 3;
inline constexpr int usage = 64;
}  // namespace exit_code

/// The qpack command line. `args` excludes the program name. `in` backs the
/// "-" file argument. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace qpack
