#pragma once

#include <ostream>

namespace aitsde {

// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitConfig = 3;

// Verbs: check-params, simulate, convergence, efficiency, positivity,
// moments, tau-eps. Never throws; failures become a one-line diagnostic on
// `err` and a nonzero exit code.
int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace aitsde
