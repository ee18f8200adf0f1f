// qcore.cpp

#include "iongrad/qcore.hpp"

#include <cmath>
#include <sstream>

namespace iongrad::qcore {

namespace {
constexpr Complex kI{0.0, 1.0};
}

double Operator::hermiticity_error() const {
    const double scale = m.norm();
    if (scale == 0.0) return 0.0;
    return (m - m.adjoint().eval()).norm() / scale;
}

double Operator::unitarity_error() const {
    const int d = space.dim();
    Matrix res = m.adjoint() * m - Matrix::Identity(d, d);
    return res.norm() / std::sqrt(static_cast<double>(d));
}

QuantumState QuantumState::make_pure(HilbertSpace s, Vector v) {
    if (v.size() != s.dim()) throw std::invalid_argument("pure state dimension mismatch");
    QuantumState st{Kind::pure, s, std::move(v), Matrix()};
    if (std::abs(st.psi.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("pure state not normalized");
    return st;
}

QuantumState QuantumState::make_density(HilbertSpace s, Matrix r) {
    if (r.rows() != s.dim() || r.cols() != s.dim())
        throw std::invalid_argument("density matrix dimension mismatch");
    QuantumState st{Kind::density, s, Vector(), std::move(r)};
    const double scale = st.rho.norm();
    if (scale > 0 && (st.rho - st.rho.adjoint().eval()).norm() / scale > 1e-12)
        throw std::invalid_argument("density matrix not Hermitian");
    if (std::abs(st.rho.trace().real() - 1.0) > 1e-9)
        throw std::invalid_argument("density matrix trace != 1");
    return st;
}

QuantumState QuantumState::basis(HilbertSpace s, int spin, int n) {
    if (spin < 0 || spin > 1 || n < 0 || n >= s.fock_dim)
        throw std::invalid_argument("basis index out of range");
    Vector v = Vector::Zero(s.dim());
    v(s.index(spin, n)) = 1.0;
    return make_pure(s, std::move(v));
}

QuantumState QuantumState::to_density() const {
    if (kind == Kind::density) return *this;
    return make_density(space, psi * psi.adjoint());
}

double QuantumState::norm_error() const {
    if (kind == Kind::pure) return std::abs(psi.norm() - 1.0);
    return std::abs(rho.trace().real() - 1.0);
}

Operator identity(HilbertSpace s) {
    return {s, Matrix::Identity(s.dim(), s.dim())};
}

Operator annihilation(HilbertSpace s) {
    const int n = s.fock_dim;
    Matrix m = Matrix::Zero(s.dim(), s.dim());
    for (int spin = 0; spin < 2; ++spin)
        for (int k = 1; k < n; ++k)
            m(s.index(spin, k - 1), s.index(spin, k)) = std::sqrt(static_cast<double>(k));
    return {s, std::move(m)};
}

Operator creation(HilbertSpace s) {
    return annihilation(s).adjoint();
}

Operator number_op(HilbertSpace s) {
    Matrix m = Matrix::Zero(s.dim(), s.dim());
    for (int spin = 0; spin < 2; ++spin)
        for (int k = 0; k < s.fock_dim; ++k)
            m(s.index(spin, k), s.index(spin, k)) = static_cast<double>(k);
    return {s, std::move(m)};
}

SpinOps spin_ops(HilbertSpace s) {
    const int n = s.fock_dim;
    Matrix sz = Matrix::Zero(s.dim(), s.dim());
    Matrix sp = Matrix::Zero(s.dim(), s.dim());
    for (int k = 0; k < n; ++k) {
        sz(s.index(0, k), s.index(0, k)) = -1.0;
        sz(s.index(1, k), s.index(1, k)) = 1.0;
        sp(s.index(1, k), s.index(0, k)) = 1.0; // |↑,n⟩⟨↓,n|
    }
    Operator osz{s, std::move(sz)};
    Operator osp{s, std::move(sp)};
    Operator osm = osp.adjoint();
    Operator osx = osp + osm;
    return {osz, osp, osm, osx};
}

Operator expm_hermitian(const Operator& h, double scale) {
    if (h.hermiticity_error() > 1e-10)
        throw std::invalid_argument("expm_hermitian: input is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.m);
    const auto& lam = es.eigenvalues();
    const auto& v = es.eigenvectors();
    Vector phases(lam.size());
    for (int k = 0; k < lam.size(); ++k)
        phases(k) = std::exp(-kI * (scale * lam(k)));
    return {h.space, v * phases.asDiagonal() * v.adjoint()};
}

QuantumState thermal_state(HilbertSpace s, double nbar, double tail_tol) {
    if (nbar < 0) throw std::invalid_argument("thermal_state: nbar must be >= 0");
    const int n = s.fock_dim;
    Matrix rho = Matrix::Zero(s.dim(), s.dim());
    if (nbar == 0.0) {
        rho(s.index(0, 0), s.index(0, 0)) = 1.0;
        return QuantumState::make_density(s, std::move(rho));
    }
    const double q = nbar / (nbar + 1.0);
    const double tail = std::pow(q, n);
    if (tail > tail_tol) {
        const int needed = static_cast<int>(std::ceil(std::log(tail_tol) / std::log(q)));
        std::ostringstream msg;
        msg << "thermal_state: tail weight " << tail << " beyond N=" << n
            << " exceeds " << tail_tol << "; need fock_dim >= " << needed;
        throw TruncationError(msg.str(), 0.0, tail);
    }
    double norm = 0.0;
    for (int k = 0; k < n; ++k) norm += std::pow(q, k);
    for (int k = 0; k < n; ++k)
        rho(s.index(0, k), s.index(0, k)) = std::pow(q, k) / norm;
    return QuantumState::make_density(s, std::move(rho));
}

double measure_up(const QuantumState& st) {
    const int n = st.space.fock_dim;
    double p = 0.0;
    if (st.is_pure()) {
        for (int k = 0; k < n; ++k) p += std::norm(st.psi(st.space.index(1, k)));
    } else {
        for (int k = 0; k < n; ++k) p += st.rho(st.space.index(1, k), st.space.index(1, k)).real();
    }
    return std::clamp(p, 0.0, 1.0);
}

double mean_phonon(const QuantumState& st) {
    const int n = st.space.fock_dim;
    double m = 0.0;
    for (int spin = 0; spin < 2; ++spin)
        for (int k = 0; k < n; ++k) {
            const int i = st.space.index(spin, k);
            const double p = st.is_pure() ? std::norm(st.psi(i)) : st.rho(i, i).real();
            m += k * p;
        }
    return std::max(m, 0.0);
}

QuantumState reset_spin_down(const QuantumState& st) {
    const QuantumState d = st.to_density();
    const int n = st.space.fock_dim;
    Matrix rho = Matrix::Zero(st.space.dim(), st.space.dim());
    // Tr_spin: motional coherences survive, spin coherences do not.
    rho.topLeftCorner(n, n) = d.rho.topLeftCorner(n, n) + d.rho.bottomRightCorner(n, n);
    return QuantumState::make_density(st.space, std::move(rho));
}

} // namespace iongrad::qcore
