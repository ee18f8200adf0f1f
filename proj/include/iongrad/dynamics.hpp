// dynamics.hpp — time evolution under shaped, time-dependent Hamiltonians
//
// The propagator is a midpoint piecewise-constant exponential rule:
// U(t+dt, t) = exp(−i·H(t+dt/2)·dt), exactly unitary per substep.  For speed
// the evolution runs in a spin frame co-rotating at the microwave detuning
// (ψ' = exp(iδtσz/2)ψ), where the Hamiltonian is periodic in the gradient
// drive period; the returned state is transformed back to the interaction
// frame of rotating_frame_hamiltonian.  Populations and phonon numbers are
// identical in both frames.

#pragma once

#include <variant>
#include <vector>

#include "iongrad/envelope.hpp"
#include "iongrad/model.hpp"
#include "iongrad/qcore.hpp"

namespace iongrad::dynamics {

struct DriveProgram {
    model::Couplings couplings;
    PulseEnvelope mw_envelope;
    PulseEnvelope gradient_envelope;
    double duration = 0.0; // s, >= each envelope total
};

struct PropagationSettings {
    double max_step = 0.0;          // s; 0 derives (2π/ω_fastest)/20 from the couplings
    int samples = 2;                // observable recordings, endpoints included
    double truncation_guard = 1e-6; // max tolerated population in the top two Fock levels
};

struct EvolutionRecord {
    std::vector<double> times;  // s
    std::vector<double> p_up;
    std::vector<double> mean_n;
    qcore::QuantumState final_state;
};

// max(2ω_g, |ω_r−ω_g|, |δ|, Ωμ, 2|Ωz|) — the fastest scale the midpoint rule
// must resolve
double fastest_angular_frequency(const model::Couplings& c);
double recommended_max_step(const model::Couplings& c, double oversample = 20.0);

EvolutionRecord propagate(const DriveProgram& program,
                          const qcore::QuantumState& initial,
                          const PropagationSettings& settings);

// same, with explicit strictly increasing sample times in [0, duration]
EvolutionRecord propagate(const DriveProgram& program,
                          const qcore::QuantumState& initial,
                          const PropagationSettings& settings,
                          std::vector<double> sample_times);

struct RepumpMarker {};
using SequenceStep = std::variant<DriveProgram, RepumpMarker>;

// pulse trains with interleaved optical repumping; density evolution
EvolutionRecord evolve_density_sequence(const std::vector<SequenceStep>& steps,
                                        const qcore::QuantumState& initial,
                                        const PropagationSettings& settings);

// Lab-frame evolution (model::lab_frame_hamiltonian) for RWA validation;
// no co-rotating-frame optimization, every substep is resolved.
EvolutionRecord propagate_lab(const DriveProgram& program, double omega0_sim,
                              const qcore::QuantumState& initial,
                              const PropagationSettings& settings);

} // namespace iongrad::dynamics
