#pragma once

#include <iosfwd>

#include "gbt/config.hpp"

namespace gbt {

/// Runs the enabled suites in a fixed order and writes report.json into
/// cfg.output_dir. Returns 0 when every check passes, 1 otherwise.
int run_verify(const ExperimentConfig& cfg, std::ostream& log);

}  // namespace gbt
