// config.hpp — JSON run-configuration parsing and validation

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "iongrad/experiments.hpp"

namespace iongrad::cli {

struct ExperimentSpec {
    std::string type; // spectroscopy | rabi | bessel | sideband-char | cool | thermometry
    std::vector<double> values;      // swept values; meaning depends on type
    std::vector<std::string> modes;  // spectroscopy overlay modes
    std::vector<int> orders;         // bessel spin-flip orders
    double pulse = 500e-6;           // s, probe/cooling pulse length
    int pulses = 12;                 // cooling pulse count
    double analysis_pulse = 0.0;     // s, 0 = auto
};

struct RunConfig {
    experiments::ScanBase base;
    ExperimentSpec experiment;
    std::string output_path = "out.csv";
    std::vector<std::string> warnings; // parse-time physics warnings
    uint64_t config_hash = 0;          // over semantic fields only
};

// Strict parse: unknown keys are rejected with their path and a nearest-key
// suggestion; parse errors carry line/column.  All frequencies in the file
// are ordinary frequencies (Hz); conversion to rad/s happens downstream in
// derive_couplings.
RunConfig parse_config(const std::string& text);
RunConfig load_config_file(const std::string& path);

} // namespace iongrad::cli
