#pragma once

namespace doseopt::cli {

// Full argv-to-exit-code entry point. Exit codes: 0 success, 2 parse or
// validation failure, 3 infeasible model space, 1 anything else.
int run_cli(int argc, const char* const* argv);

}  // namespace doseopt::cli
