// envelope.cpp

#include "iongrad/envelope.hpp"

#include <cmath>

namespace iongrad::dynamics {

PulseEnvelope PulseEnvelope::rectangular(double plateau, double ramp) {
    if (plateau < 0 || ramp < 0) throw ConstraintError("PulseEnvelope: negative time");
    return {EnvelopeKind::rectangular, ramp, plateau};
}

PulseEnvelope PulseEnvelope::blackman(double ramp, double plateau) {
    if (plateau < 0 || ramp <= 0) throw ConstraintError("PulseEnvelope: blackman needs ramp_time > 0");
    return {EnvelopeKind::blackman, ramp, plateau};
}

namespace {
// rising half of the Blackman window, 0 at u=0 and 1 at u=1
double blackman_ramp(double u) {
    return 0.42 - 0.5 * std::cos(M_PI * u) + 0.08 * std::cos(2.0 * M_PI * u);
}
} // namespace

double PulseEnvelope::value(double t) const {
    if (t <= 0.0 || t >= total()) return 0.0;
    double u = 1.0;
    if (ramp_time > 0.0) {
        if (t < ramp_time)
            u = t / ramp_time;
        else if (t > ramp_time + plateau_time)
            u = (total() - t) / ramp_time;
        else
            return 1.0;
    } else {
        return 1.0;
    }
    return kind == EnvelopeKind::blackman ? blackman_ramp(u) : u;
}

std::optional<double> PulseEnvelope::constant_on(double t0, double t1) const {
    const double eps = 1e-12 * (total() + 1.0);
    if (t1 <= t0) return value(0.5 * (t0 + t1));
    if (t0 >= total() - eps) return 0.0;
    if (t1 <= eps) return 0.0;
    if (ramp_time == 0.0) {
        if (t0 >= -eps && t1 <= total() + eps) return 1.0;
        return std::nullopt;
    }
    if (t0 >= ramp_time - eps && t1 <= ramp_time + plateau_time + eps) return 1.0;
    return std::nullopt;
}

} // namespace iongrad::dynamics
