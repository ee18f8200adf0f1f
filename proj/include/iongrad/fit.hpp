// fit.hpp — sin² Rabi-oscillation fitting

#pragma once

#include <vector>

#include "iongrad/errors.hpp"

namespace iongrad::experiments {

// p(t) = amplitude·sin²(frequency·t + phase) + offset
struct RabiFit {
    double frequency = 0.0; // rad/s, >= 0
    double amplitude = 0.0;
    double offset = 0.0;
    double phase = 0.0;      // rad
    double rms_residual = 0.0;
};

// Coarse least-squares frequency search followed by local refinement; the
// model is linear in (amplitude, offset, phase) once the frequency is fixed,
// via p = α + β·cos(2Ωt) + γ·sin(2Ωt).  Throws FitError when the data do
// not oscillate (spectral peak indistinct) or fewer than 8 samples.
RabiFit fit_rabi(const std::vector<double>& times, const std::vector<double>& p_up);

} // namespace iongrad::experiments
