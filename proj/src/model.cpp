// model.cpp

#include "iongrad/model.hpp"

#include <cmath>

#include "iongrad/bessel.hpp"
#include "iongrad/constants.hpp"
#include "iongrad/errors.hpp"

namespace iongrad::model {

namespace {
using qcore::Complex;
using qcore::Matrix;
using qcore::Operator;
constexpr Complex kI{0.0, 1.0};
constexpr double kTwoPi = constants::two_pi;

double bessel_argument(const Couplings& c) {
    if (c.omega_gdrive == 0.0) {
        if (c.omega_z != 0.0)
            throw ConstraintError("Bessel argument undefined: omega_g = 0 with omega_z != 0");
        return 0.0;
    }
    return 4.0 * c.omega_z / c.omega_gdrive;
}
} // namespace

Couplings derive_couplings(const IonTrapConfig& trap, const DriveConfig& drive) {
    auto it = trap.mode_freqs.find(drive.mode);
    if (it == trap.mode_freqs.end())
        throw ConstraintError("derive_couplings: unknown mode label '" + drive.mode + "'");
    if (trap.ion_mass <= 0.0) throw ConstraintError("derive_couplings: ion_mass must be > 0");
    if (it->second <= 0.0) throw ConstraintError("derive_couplings: mode frequency must be > 0");

    Couplings c;
    c.omega_r = kTwoPi * it->second;
    c.omega_gdrive = kTwoPi * drive.gradient_freq;
    c.omega_mu = kTwoPi * drive.mw_rabi;
    c.delta = kTwoPi * drive.mw_detuning;
    c.r0 = std::sqrt(constants::hbar / (2.0 * trap.ion_mass * c.omega_r));
    const double dw_db = kTwoPi * trap.field_sensitivity; // rad/s per tesla
    c.omega_g = c.r0 * drive.gradient_projection / 4.0 * dw_db;
    c.omega_z = drive.field_at_ion / 4.0 * dw_db;
    c.gradient_phase = drive.gradient_phase;
    c.mw_phase = drive.mw_phase;
    return c;
}

double microwave_rabi_from_field(double b_x, double moment_matrix_element) {
    return b_x * moment_matrix_element / (2.0 * constants::hbar);
}

qcore::Operator rotating_frame_hamiltonian(const Couplings& c, double t,
                                           double envelope_value,
                                           qcore::HilbertSpace space) {
    const int n = space.fock_dim;
    Matrix h = Matrix::Zero(space.dim(), space.dim());
    const double wg = c.omega_gdrive;

    // σz ⊗ [a e^{iφ} + a† e^{−iφ} + a e^{−i(2ωg t+φ)} + a† e^{i(2ωg t+φ)}],
    // scaled by Ωg
    const Complex z = std::exp(kI * c.gradient_phase) +
                      std::exp(-kI * (2.0 * wg * t + c.gradient_phase));
    const double zdiag = 2.0 * c.omega_z * std::cos(wg * t + c.gradient_phase);
    const double wmot = c.omega_r - wg;
    const Complex mw = c.omega_mu * envelope_value *
                       std::exp(-kI * (c.delta * t + c.mw_phase));

    for (int spin = 0; spin < 2; ++spin) {
        const double sz = spin ? 1.0 : -1.0;
        for (int k = 0; k < n; ++k) {
            const int i = space.index(spin, k);
            h(i, i) = sz * zdiag + wmot * k;
            if (k + 1 < n) {
                const double amp = std::sqrt(static_cast<double>(k + 1));
                h(space.index(spin, k), space.index(spin, k + 1)) = sz * c.omega_g * z * amp;
                h(space.index(spin, k + 1), space.index(spin, k)) =
                    sz * c.omega_g * std::conj(z) * amp;
            }
        }
    }
    for (int k = 0; k < n; ++k) {
        h(space.index(1, k), space.index(0, k)) = mw;            // σ₊ term
        h(space.index(0, k), space.index(1, k)) = std::conj(mw); // σ₋ term
    }
    return Operator{space, std::move(h)};
}

qcore::Operator lab_frame_hamiltonian(const Couplings& c, double omega0_sim,
                                      double t, double envelope_value,
                                      qcore::HilbertSpace space) {
    if (omega0_sim <= 0.0)
        throw ConstraintError("lab_frame_hamiltonian: omega0_sim must be > 0");
    const int n = space.fock_dim;
    Matrix h = Matrix::Zero(space.dim(), space.dim());
    const double grad = 2.0 * c.omega_g * std::cos(c.omega_gdrive * t + c.gradient_phase);
    const double mw = 2.0 * c.omega_mu * envelope_value *
                      std::cos((omega0_sim + c.delta) * t + c.mw_phase);

    for (int spin = 0; spin < 2; ++spin) {
        const double sz = spin ? 1.0 : -1.0;
        for (int k = 0; k < n; ++k) {
            const int i = space.index(spin, k);
            h(i, i) = sz * omega0_sim / 2.0 + c.omega_r * k;
            if (k + 1 < n) {
                const double amp = std::sqrt(static_cast<double>(k + 1));
                h(space.index(spin, k), space.index(spin, k + 1)) = sz * grad * amp;
                h(space.index(spin, k + 1), space.index(spin, k)) = sz * grad * amp;
            }
        }
        for (int k = 0; k < n; ++k) {
            h(space.index(1, k), space.index(0, k)) = mw; // σx couples the spin blocks
            h(space.index(0, k), space.index(1, k)) = mw;
        }
    }
    return Operator{space, std::move(h)};
}

double sideband_rabi(const Couplings& c, Branch branch) {
    if (c.omega_gdrive == 0.0) {
        if (c.omega_z != 0.0)
            throw ConstraintError("sideband_rabi: omega_g = 0 requires omega_z = 0");
        if (c.omega_r == 0.0) throw ResonanceError("sideband_rabi: omega_r = 0");
        return std::abs(4.0 * c.omega_g * c.omega_mu / c.omega_r);
    }
    const double denom = branch == Branch::minus ? c.omega_r - c.omega_gdrive
                                                 : c.omega_r + c.omega_gdrive;
    if (denom == 0.0)
        throw ResonanceError("sideband_rabi: gradient drive resonant with the mode");
    return std::abs(2.0 * c.omega_g * c.omega_mu / denom) *
           std::abs(bessel::bessel_j(0, bessel_argument(c)));
}

double spinflip_rabi(const Couplings& c, int m) {
    return c.omega_mu * bessel::bessel_j(m, bessel_argument(c));
}

double sideband_rabi_mth(const Couplings& c, int m) {
    if (c.omega_gdrive == 0.0) {
        if (c.omega_z != 0.0)
            throw ConstraintError("sideband_rabi_mth: omega_g = 0 requires omega_z = 0");
        return m == 0 ? 4.0 * c.omega_g * c.omega_mu / c.omega_r : 0.0;
    }
    const double denom = c.omega_r - c.omega_gdrive;
    if (denom == 0.0)
        throw ResonanceError("sideband_rabi_mth: gradient drive resonant with the mode");
    return 2.0 * c.omega_g * c.omega_mu / denom *
           bessel::bessel_j(m, bessel_argument(c));
}

double sideband_resonance_detuning(const Couplings& c, SidebandSign sign) {
    const double gap = c.omega_r - c.omega_gdrive;
    if (2.0 * c.omega_mu >= std::abs(gap))
        throw ConstraintError(
            "sideband_resonance_detuning: 2*omega_mu >= |omega_r - omega_g|, "
            "no real sideband resonance");
    const double d = std::sqrt(gap * gap - 4.0 * c.omega_mu * c.omega_mu);
    return sign == SidebandSign::blue ? d : -d;
}

double efield_spinflip_rabi(double omega_musb, double efield, const Couplings& c) {
    if (c.omega_r == c.omega_gdrive)
        throw ResonanceError("efield_spinflip_rabi: omega_g = omega_r");
    const double omega_e =
        constants::elementary_charge * efield * c.r0 / (2.0 * constants::hbar);
    return 2.0 * omega_musb * omega_e * c.omega_r /
           (c.omega_r * c.omega_r - c.omega_gdrive * c.omega_gdrive);
}

} // namespace iongrad::model
