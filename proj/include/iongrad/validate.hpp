// validate.hpp — end-to-end validation suite
//
// Each criterion compares full time-domain simulations against the
// closed-form predictions of the effective-Hamiltonian model (sideband
// rates, dressed resonances, Bessel dressing, cooling limits) or checks a
// numerical invariant.  Shared by the `validate` CLI subcommand and the
// acceptance test binary.

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace iongrad::validate {

struct CriterionResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

CriterionResult sideband_rates();        // fitted BSB rate vs 2ΩgΩμ/(ω_r−ω_g)
CriterionResult resonance_detunings();   // fitted δ_res vs √((ω_r−ω_g)²−4Ωμ²)
CriterionResult bessel_dressing();       // |Ω_m|/Ωμ vs |J_m(4Ωz/ω_g)|
CriterionResult spectroscopy_lines();    // two-mode overlay line positions
CriterionResult cooling_and_thermometry();
CriterionResult static_gradient();       // ω_g = 0 rate vs 4ΩgΩμ/ω_r
CriterionResult invariant_suite();       // unitarity, convergence, determinism
CriterionResult rwa_crosscheck();        // lab frame vs rotating frame

// Runs every criterion, printing one PASS/FAIL line each; returns the number
// of failures.
int run_all(std::ostream& out);

} // namespace iongrad::validate
