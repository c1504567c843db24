#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sidonlab::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes: 0 success, 1 failed self-test or internal error, 2 domain
/// error (including malformed input), 3 capacity error, 4 extraction failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sidonlab::cli
