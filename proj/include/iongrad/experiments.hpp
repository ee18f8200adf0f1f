// experiments.hpp — scan drivers: spectroscopy, Rabi scans, Bessel dressing,
// sideband characterization, ground-state cooling, and sideband thermometry

#pragma once

#include <string>
#include <vector>

#include "iongrad/dynamics.hpp"
#include "iongrad/fit.hpp"
#include "iongrad/model.hpp"

namespace iongrad::experiments {

// Everything a single scan point needs: trap + drive parameterization, pulse
// shapes, propagation settings, and the initial motional state.
struct ScanBase {
    model::IonTrapConfig trap;
    model::DriveConfig drive;
    dynamics::PulseEnvelope mw_envelope;
    dynamics::PulseEnvelope gradient_envelope;
    dynamics::PropagationSettings settings;
    int fock_dim = 16;
    double initial_nbar = 0.0; // <= 0 selects the |↓,0⟩ ground state
};

// swept_parameter is one of: "mw_detuning" (Hz), "field_at_ion" (T),
// "mw_rabi" (Hz)
struct ScanSpec {
    ScanBase base;
    std::string swept_parameter;
    std::vector<double> values;
};

struct LineAnnotation {
    double detuning_hz;
    std::string label;
};

struct Spectrum {
    std::vector<double> detunings_hz;
    std::vector<double> p_up;               // NaN for failed points
    std::vector<std::string> notes;         // failure reason, empty when ok
    std::vector<LineAnnotation> annotations; // predicted, never fitted
};

// Fixed-length probe pulse per detuning point; annotations at δ = ±m·ω_g and
// ±(ω_r ± ω_g) computed from the configuration.
Spectrum spectroscopy(const ScanSpec& spec, double pulse_duration = 500e-6);

// Same scan repeated for several motional modes; p_up combined as
// 1 − ∏(1 − p_i), the overlay of independent single-mode responses.
Spectrum spectroscopy_overlay(const ScanSpec& spec,
                              const std::vector<std::string>& modes,
                              double pulse_duration = 500e-6);

struct TimeScan {
    std::vector<double> times;
    std::vector<double> p_up;
};

// p_up after pulses of the given (strictly increasing) durations.  For
// unramped envelopes this is a single propagation sampled mid-flight.
TimeScan rabi_timescan(const ScanBase& base, const std::vector<double>& durations);
RabiFit fit_rabi(const TimeScan& scan);

struct BesselPoint {
    double argument = 0.0; // 4Ωz/ω_g
    int order = 0;
    double ratio = 0.0;    // |Ω_m|/Ωμ, NaN when !ok
    bool ok = true;
    std::string note;
};

// Spin-flip Rabi frequency at δ = m·ω_g versus oscillating-field amplitude,
// normalized to Ωμ.  Near-null points fall back to a small-angle probe
// instead of a full oscillation fit.
std::vector<BesselPoint> bessel_scan(const ScanBase& base,
                                     const std::vector<double>& field_values,
                                     const std::vector<int>& orders);

struct SidebandPoint {
    double drive_ratio = 0.0; // 2Ωμ/(ω_r−ω_g)
    double sb_ratio = 0.0;    // fitted Ω_sb/|Ωg|
    double res_ratio = 0.0;   // fitted δ_res/(ω_r−ω_g)
    bool ok = true;
    std::string note;
};

// Blue-sideband resonance located by a local detuning scan, then the Rabi
// frequency fitted on resonance; requires B_g = 0 and a ground-state start.
std::vector<SidebandPoint> sideband_characterization(
    const ScanBase& base, const std::vector<double>& mw_rabi_values);

struct ThermometryResult {
    double ratio = 0.0; // p_up(red)/p_up(blue), in [0,1)
    double nbar = 0.0;  // ratio/(1−ratio)
    double p_rsb = 0.0;
    double p_bsb = 0.0;
};

// Equal-duration red and blue sideband analysis pulses on a spin-down state;
// duration 0 selects the π-time of the blue sideband at n = 1.
ThermometryResult thermometry(const qcore::QuantumState& state, const ScanBase& base,
                              double analysis_duration = 0.0);

struct CoolingResult {
    dynamics::EvolutionRecord record;
    std::vector<double> pulse_nbar; // ⟨a†a⟩ after each pulse + repump
    double direct_nbar = 0.0;
    ThermometryResult thermo;
};

// Red-sideband pulse train with interleaved repumping on a thermal initial
// state, followed by sideband thermometry of the result.
CoolingResult cooling_run(const ScanBase& base, int pulses = 12,
                          double pulse_length = 150e-6,
                          double analysis_duration = 0.0);

} // namespace iongrad::experiments
