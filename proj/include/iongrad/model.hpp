// model.hpp — trap/drive parameterization, Hamiltonians, closed-form Rabi frequencies
//
// Unit convention: every config field is an ordinary frequency in Hz (or SI
// field units); every Couplings field is an angular frequency in rad/s.  The
// conversion happens exactly once, in derive_couplings.

#pragma once

#include <map>
#include <string>

#include "iongrad/qcore.hpp"

namespace iongrad::model {

struct IonTrapConfig {
    double ion_mass = 0.0;                       // kg
    std::map<std::string, double> mode_freqs;    // mode label -> Hz
    double qubit_freq = 0.0;                     // Hz
    double field_sensitivity = 0.0;              // Hz per tesla, signed
    double static_field = 0.0;                   // tesla
};

struct DriveConfig {
    std::string mode;                 // key into IonTrapConfig::mode_freqs
    double gradient_freq = 0.0;       // Hz; 0 selects the static-gradient limit
    double gradient_projection = 0.0; // tesla/m along the simulated mode
    double field_at_ion = 0.0;        // tesla (oscillating field B_g at the ion)
    double mw_rabi = 0.0;             // Hz
    double mw_detuning = 0.0;         // Hz
    double gradient_phase = 0.0;      // rad, drive phase at t = 0
    double mw_phase = 0.0;            // rad
};

// All angular frequencies in rad/s.  omega_g carries the sign of
// field_sensitivity × gradient_projection.
struct Couplings {
    double omega_g = 0.0;       // spin-motion coupling
    double omega_z = 0.0;       // qubit-frequency modulation from B_g
    double r0 = 0.0;            // ground-state extent, m
    double omega_r = 0.0;       // motional mode
    double omega_gdrive = 0.0;  // gradient drive
    double omega_mu = 0.0;      // microwave Rabi
    double delta = 0.0;         // microwave detuning
    double gradient_phase = 0.0;
    double mw_phase = 0.0;
};

enum class Branch { minus, plus };        // sideband at ω_r − ω_g vs ω_r + ω_g
enum class SidebandSign { blue, red };

Couplings derive_couplings(const IonTrapConfig& trap, const DriveConfig& drive);

// Ωμ = B_x ⟨↓|μ_x|↑⟩ / (2ħ)
double microwave_rabi_from_field(double b_x, double moment_matrix_element);

// Interaction-picture Hamiltonian (rad/s).  envelope_value scales the
// microwave term only; gradient shaping is applied by the caller through a
// scaled Couplings copy.
qcore::Operator rotating_frame_hamiltonian(const Couplings& c, double t,
                                           double envelope_value,
                                           qcore::HilbertSpace space);

// Lab-frame Hamiltonian at an artificially reduced qubit frequency, for
// rotating-wave-approximation validation.
qcore::Operator lab_frame_hamiltonian(const Couplings& c, double omega0_sim,
                                      double t, double envelope_value,
                                      qcore::HilbertSpace space);

// |Ω_sb| = |2 Ωg Ωμ / (ω_r ∓ ω_g)|·|J₀(4Ωz/ω_g)|; at ω_g = 0 the two
// branches are degenerate and the static limit 4ΩgΩμ/ω_r is returned.
double sideband_rabi(const Couplings& c, Branch branch);

// Ωm = Ωμ·J_m(4Ωz/ω_g), signed
double spinflip_rabi(const Couplings& c, int m);

// (2ΩgΩμ/(ω_r−ω_g))·J_m(4Ωz/ω_g), signed; static limit handling as above
double sideband_rabi_mth(const Couplings& c, int m);

// δ = ±√((ω_r−ω_g)² − 4Ωμ²); throws ConstraintError when 2Ωμ ≥ |ω_r−ω_g|
double sideband_resonance_detuning(const Couplings& c, SidebandSign sign);

// Electric-field-induced spin-flip Rabi frequency:
// Ω = 2·Ω_musb·Ω_e·ω_r/(ω_r²−ω_g²) with Ω_e = qEr₀/(2ħ)
double efield_spinflip_rabi(double omega_musb, double efield, const Couplings& c);

} // namespace iongrad::model
