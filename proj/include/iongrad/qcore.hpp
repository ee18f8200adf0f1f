// qcore.hpp — dense complex linear algebra over the (2-level spin) ⊗ (N-level Fock) space
//
// Tensor ordering is fixed everywhere in this library: spin index slow, Fock
// index fast.  Basis state |s,n⟩ lives at row s*N + n with s = 0 for |↓⟩ and
// s = 1 for |↑⟩.

#pragma once

#include <Eigen/Dense>
#include <complex>

#include "iongrad/errors.hpp"

namespace iongrad::qcore {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct HilbertSpace {
    int fock_dim; // Fock truncation N, >= 2

    explicit HilbertSpace(int n) : fock_dim(n) {
        if (n < 2) throw std::invalid_argument("HilbertSpace: fock_dim must be >= 2");
    }
    int dim() const { return 2 * fock_dim; }
    int index(int spin, int n) const { return spin * fock_dim + n; }
    bool operator==(const HilbertSpace& o) const { return fock_dim == o.fock_dim; }
};

struct Operator {
    HilbertSpace space;
    Matrix m;

    Operator(HilbertSpace s, Matrix mat) : space(s), m(std::move(mat)) {}

    Operator adjoint() const { return {space, m.adjoint()}; }
    // relative Frobenius deviation from H = H†
    double hermiticity_error() const;
    // ‖U†U − I‖_F / ‖I‖_F
    double unitarity_error() const;

    friend Operator operator+(const Operator& a, const Operator& b) { return {a.space, a.m + b.m}; }
    friend Operator operator-(const Operator& a, const Operator& b) { return {a.space, a.m - b.m}; }
    friend Operator operator*(const Operator& a, const Operator& b) { return {a.space, a.m * b.m}; }
    friend Operator operator*(Complex c, const Operator& a) { return {a.space, c * a.m}; }
    friend Operator operator*(double c, const Operator& a) { return {a.space, c * a.m}; }
};

struct QuantumState {
    enum class Kind { pure, density };

    Kind kind;
    HilbertSpace space;
    Vector psi;  // kind == pure
    Matrix rho;  // kind == density

    static QuantumState make_pure(HilbertSpace s, Vector v);
    static QuantumState make_density(HilbertSpace s, Matrix r);
    // |s,n⟩ basis vector
    static QuantumState basis(HilbertSpace s, int spin, int n);

    QuantumState to_density() const;
    bool is_pure() const { return kind == Kind::pure; }
    // diagnostics used by the invariant tests
    double norm_error() const;   // | ‖ψ‖−1 | or | Tr ρ − 1 |
};

Operator identity(HilbertSpace s);
// I₂ ⊗ a with a[n−1, n] = √n
Operator annihilation(HilbertSpace s);
Operator creation(HilbertSpace s);
Operator number_op(HilbertSpace s);

struct SpinOps {
    Operator sz, sp, sm, sx;
};
// σz = |↑⟩⟨↑| − |↓⟩⟨↓|, σ± raise/lower, σx = σ₊ + σ₋, all tensored with I_Fock
SpinOps spin_ops(HilbertSpace s);

// exp(−i·scale·H) by spectral decomposition; rejects non-Hermitian input.
Operator expm_hermitian(const Operator& h, double scale);

// |↓⟩⟨↓| ⊗ diag(pₙ) with pₙ = n̄ⁿ/(n̄+1)ⁿ⁺¹, renormalized on the truncated
// space.  Throws TruncationError when the tail weight beyond N exceeds
// tail_tol; the message carries the Fock dimension that would suffice.
QuantumState thermal_state(HilbertSpace s, double nbar, double tail_tol = 1e-6);

// ⟨ |↑⟩⟨↑| ⊗ I ⟩
double measure_up(const QuantumState& st);
// ⟨a†a⟩
double mean_phonon(const QuantumState& st);
// optical-pumping model: ρ → |↓⟩⟨↓| ⊗ Tr_spin ρ (pure input converted first)
QuantumState reset_spin_down(const QuantumState& st);

} // namespace iongrad::qcore
