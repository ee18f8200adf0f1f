// run.hpp — experiment dispatch: RunConfig in, result tables out

#pragma once

#include <string>
#include <vector>

#include "iongrad/config.hpp"
#include "iongrad/table.hpp"

namespace iongrad::cli {

struct RunOutput {
    ResultTable table;
    std::vector<experiments::LineAnnotation> annotations; // spectroscopy sidecar
    std::vector<std::string> notes;                       // diagnostics for stderr
};

// Executes the experiment named in the config and renders a deterministic
// ResultTable (identical config -> byte-identical CSV).
RunOutput run_experiment(const RunConfig& rc);

inline const char* tool_version() { return "iongrad 1.0.0"; }

} // namespace iongrad::cli
