#pragma once

#include <iosfwd>

namespace sudr::cli {

/// Process exit statuses.
enum ExitCode : int {
    kOk = 0,
    kInternal = 1,
    kUsage = 2,         ///< bad flags or configuration
    kNotConverged = 3,  ///< fit finished but R-hat or ESS failed the gate
    kDataError = 4,     ///< missing, malformed or insufficient input
    kNumerical = 5,     ///< sampler failure or numerical blow-up
    kPartial = 6,       ///< robustness finished with failed models
};

/// Runs the `sudr` command line. Artifacts go to files, progress to `out`,
/// and every failure writes one JSON object to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sudr::cli
