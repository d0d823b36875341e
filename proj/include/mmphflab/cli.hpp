#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mmphflab {

inline constexpr const char* tool_name = "mmphflab";
inline constexpr const char* tool_version = "0.1.0";

/// Exit codes: 0 success, 2 usage, validation or cap errors, 1 internal errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mmphflab
