#pragma once

#include <string>
#include <vector>

#include "horolab/config.hpp"

namespace horolab {

inline constexpr const char* kCodeVersion = "horolab 0.1.0";

struct RunResult {
    std::vector<std::string> outputs; // files written (CSV + manifest)
    double worst_error_estimate = 0.0;
    std::string stdout_text; // aligned tables and summaries for the console
};

// Executes the configured experiment, writes the CSV per the module
// schema plus a run manifest JSON (config hash, code version, wall time,
// worst error estimate). Output bytes depend only on the config and
// thread count. Throws on failure; the CLI maps exception kinds to exit
// codes (config 2, numeric 3, cache 4).
RunResult run_experiment(const ExperimentConfig& cfg);

// Observable/base point/time change described by the config.
Observable observable_from_config(const ExperimentConfig& cfg);
SurfacePoint base_point_from_config(const ExperimentConfig& cfg);

} // namespace horolab
