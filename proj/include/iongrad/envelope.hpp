// envelope.hpp — pulse amplitude shaping

#pragma once

#include <optional>

#include "iongrad/errors.hpp"

namespace iongrad::dynamics {

enum class EnvelopeKind { rectangular, blackman };

// Amplitude multiplier in [0,1]: ramp up over ramp_time, hold at 1 for
// plateau_time, ramp down, zero outside.  Blackman ramps use the standard
// three-term cosine window; rectangular ramps are linear (ramp_time 0 gives
// a hard-edged pulse).
struct PulseEnvelope {
    EnvelopeKind kind = EnvelopeKind::rectangular;
    double ramp_time = 0.0;    // s
    double plateau_time = 0.0; // s

    static PulseEnvelope rectangular(double plateau, double ramp = 0.0);
    static PulseEnvelope blackman(double ramp, double plateau);

    double total() const { return 2.0 * ramp_time + plateau_time; }
    double value(double t) const;

    // Envelope value if it is constant on [t0, t1], nullopt when the
    // interval crosses a ramp.  Used by the propagator's plateau cache.
    std::optional<double> constant_on(double t0, double t1) const;
};

} // namespace iongrad::dynamics
