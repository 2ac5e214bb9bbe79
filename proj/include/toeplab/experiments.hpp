#pragma once

#include <string>
#include <vector>

#include "toeplab/config.hpp"
#include "toeplab/report.hpp"

namespace toeplab {

/// params, geometry, carleson, berezin, toeplitz, vanishing, verify.
const std::vector<std::string>& subcommands();

/// Runs one experiment. Report assembly is single-threaded; lower modules
/// parallelize internally.
Report run(const std::string& subcommand, const ExperimentConfig& cfg);

/// Process exit status for a finished report: 1 when a verify report has a
/// failing criterion, else 0.
int report_status(const Report& r);

}  // namespace toeplab
