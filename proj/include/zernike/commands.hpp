#pragma once

// CLI subcommands as library calls. Each writes data to `out` and progress
// to `log`; the return value is the process exit status (0 unless a hard
// error occurred). Per-cell failures are written as markers and do not abort.

#include <iosfwd>

#include "zernike/config.hpp"

namespace zernike {

/// Node coordinates for one scheme at each requested order, transferred to the
/// configured domain, in the node-file text format.
int cmd_nodes(const RunConfig& config, std::ostream& out, std::ostream& log);

/// CSV n,scheme,basis,domain,kappa2,sigma_max,sigma_min. Missing node files
/// give kappa2 = "missing"; other per-cell errors give "error".
int cmd_condition_table(const RunConfig& config, std::ostream& out, std::ostream& log);

/// CSV n,scheme,basis,mean_rrmse,trials over the segmented aperture.
int cmd_wavefront(const RunConfig& config, std::ostream& out, std::ostream& log);

/// CSV n,scheme,basis,domain,lebesgue (grid estimate).
int cmd_lebesgue(const RunConfig& config, std::ostream& out, std::ostream& log);

/// Dispatches on config.command after validate().
int run_command(RunConfig config, std::ostream& out, std::ostream& log);

}  // namespace zernike
