// dynamics.cpp
//
// Substep operators are exp(−i·H(t_mid)·dt) evaluated to machine precision
// by a shifted, internally subdivided Taylor product applied to state
// columns; the Hamiltonian apply exploits the tridiagonal-block structure.
// On envelope plateaus the locked-frame Hamiltonian is periodic in the
// gradient period, so one period propagator is built once and reused.

#include "iongrad/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "iongrad/constants.hpp"

namespace iongrad::dynamics {

namespace {

using model::Couplings;
using qcore::Complex;
using qcore::HilbertSpace;
using qcore::Matrix;
using qcore::QuantumState;
using qcore::Vector;

constexpr Complex kI{0.0, 1.0};
constexpr double kTwoPi = constants::two_pi;

// ---------------------------------------------------------------- appliers

// Locked-frame Hamiltonian at fixed t: diagonal + spin-block tridiagonal
// + static spin coupling.  All scalars pre-evaluated.
struct LockedParams {
    double wmot;   // ω_r − ω_g
    double d_down; // −2Ωz_eff cos(·) + δ/2 − shift
    double d_up;   //  2Ωz_eff cos(·) − δ/2 − shift
    Complex ztri;  // Ωg_eff (e^{iφg} + e^{−i(2ωg t+φg)})
    Complex mw;    // Ωμ·env·e^{−iφμ}, multiplies σ₊
};

LockedParams locked_params(const Couplings& c, double t, double mw_env,
                           double grad_env, double shift) {
    const double wg = c.omega_gdrive;
    const double og = c.omega_g * grad_env;
    const double zdiag = 2.0 * c.omega_z * grad_env * std::cos(wg * t + c.gradient_phase);
    LockedParams p;
    p.wmot = c.omega_r - wg;
    p.d_down = -zdiag + 0.5 * c.delta - shift;
    p.d_up = zdiag - 0.5 * c.delta - shift;
    p.ztri = og * (std::exp(kI * c.gradient_phase) +
                   std::exp(-kI * (2.0 * wg * t + c.gradient_phase)));
    p.mw = c.omega_mu * mw_env * std::exp(-kI * c.mw_phase);
    return p;
}

void apply_locked(const LockedParams& p, const std::vector<double>& sq, int n,
                  const Matrix& x, Matrix& y) {
    y.resize(x.rows(), x.cols());
    const Complex z = p.ztri, zc = std::conj(p.ztri);
    const Complex mw = p.mw, mwc = std::conj(p.mw);
    for (int c = 0; c < x.cols(); ++c) {
        const Complex* xd = x.col(c).data();
        const Complex* xu = xd + n;
        Complex* yd = y.col(c).data();
        Complex* yu = yd + n;
        for (int k = 0; k < n; ++k) {
            Complex td = (p.d_down + p.wmot * k) * xd[k] + mwc * xu[k];
            Complex tu = (p.d_up + p.wmot * k) * xu[k] + mw * xd[k];
            if (k + 1 < n) {
                td -= z * sq[k + 1] * xd[k + 1];
                tu += z * sq[k + 1] * xu[k + 1];
            }
            if (k > 0) {
                td -= zc * sq[k] * xd[k - 1];
                tu += zc * sq[k] * xu[k - 1];
            }
            yd[k] = td;
            yu[k] = tu;
        }
    }
}

// Lab-frame Hamiltonian apply (no frame locking, σx microwave coupling).
struct LabParams {
    double omega0, omega_r;
    double grad;  // 2Ωg·env·cos(ωg t+φg)
    double mw;    // 2Ωμ·env·cos((ω0+δ)t+φμ)
    double shift;
};

void apply_lab(const LabParams& p, const std::vector<double>& sq, int n,
               const Matrix& x, Matrix& y) {
    y.resize(x.rows(), x.cols());
    for (int c = 0; c < x.cols(); ++c) {
        const Complex* xd = x.col(c).data();
        const Complex* xu = xd + n;
        Complex* yd = y.col(c).data();
        Complex* yu = yd + n;
        for (int k = 0; k < n; ++k) {
            Complex td = (-0.5 * p.omega0 + p.omega_r * k - p.shift) * xd[k] + p.mw * xu[k];
            Complex tu = (0.5 * p.omega0 + p.omega_r * k - p.shift) * xu[k] + p.mw * xd[k];
            if (k + 1 < n) {
                td -= p.grad * sq[k + 1] * xd[k + 1];
                tu += p.grad * sq[k + 1] * xu[k + 1];
            }
            if (k > 0) {
                td -= p.grad * sq[k] * xd[k - 1];
                tu += p.grad * sq[k] * xu[k - 1];
            }
            yd[k] = td;
            yu[k] = tu;
        }
    }
}

// ------------------------------------------------------------ exponential

// b ← exp(−i·dt·(H_shifted + shift)) b with ‖H_shifted‖ ≤ bound; Taylor
// product, subdivided so each factor converges fast.
template <typename Apply>
void expv(const Apply& apply_h, double bound, double shift, double dt, Matrix& b,
          Matrix& term, Matrix& tmp) {
    const int nsub = std::max(1, static_cast<int>(std::ceil(bound * std::abs(dt) / 1.5)));
    const double dts = dt / nsub;
    const Complex phase = std::exp(-kI * (shift * dts));
    for (int s = 0; s < nsub; ++s) {
        term = b;
        const double bnorm = b.norm();
        for (int j = 1; j <= 64; ++j) {
            apply_h(term, tmp);
            term = (-kI * (dts / j)) * tmp;
            b += term;
            if (term.norm() < 1e-16 * bnorm) break;
        }
        b *= phase;
    }
}

// ----------------------------------------------------------------- engine

struct Engine {
    const DriveProgram& prog;
    const PropagationSettings& settings;
    HilbertSpace space;
    double max_step;
    std::vector<double> sq; // √k table

    bool density_mode = false;
    Matrix cols;            // dim × K pure ensemble (density_mode == false)
    Eigen::VectorXd weights;
    Matrix rho;             // density_mode == true

    Matrix ws_term, ws_tmp, ws_adj;

    // one-period plateau propagator
    bool cache_valid = false;
    double cache_mw_env = -1.0, cache_grad_env = -1.0;
    Matrix u_period;

    Engine(const DriveProgram& p, const PropagationSettings& s, HilbertSpace sp,
           double dt_max)
        : prog(p), settings(s), space(sp), max_step(dt_max) {
        sq.resize(space.fock_dim + 1);
        for (int k = 0; k <= space.fock_dim; ++k) sq[k] = std::sqrt(static_cast<double>(k));
    }

    double period() const {
        return prog.couplings.omega_gdrive > 0 ? kTwoPi / prog.couplings.omega_gdrive : 0.0;
    }

    double shift_value() const {
        return (prog.couplings.omega_r - prog.couplings.omega_gdrive) *
               0.5 * (space.fock_dim - 1);
    }

    double norm_bound(double mw_env, double grad_env) const {
        const Couplings& c = prog.couplings;
        const int n = space.fock_dim;
        return std::abs(c.omega_r - c.omega_gdrive) * 0.5 * (n - 1) +
               2.0 * std::abs(c.omega_z) * grad_env + 0.5 * std::abs(c.delta) +
               4.0 * std::abs(c.omega_g) * grad_env * sq[n] +
               c.omega_mu * mw_env;
    }

    void load_initial(const QuantumState& st) {
        if (st.is_pure()) {
            cols = st.psi;
            weights = Eigen::VectorXd::Ones(1);
            return;
        }
        // diagonal densities (thermal states, projector mixtures) evolve as a
        // weighted pure ensemble; anything with coherences takes the ρ path
        const int d = space.dim();
        double offdiag = 0.0;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                if (i != j) offdiag = std::max(offdiag, std::abs(st.rho(i, j)));
        if (offdiag < 1e-15) {
            std::vector<int> idx;
            for (int i = 0; i < d; ++i)
                if (st.rho(i, i).real() > 1e-14) idx.push_back(i);
            cols = Matrix::Zero(d, static_cast<int>(idx.size()));
            weights = Eigen::VectorXd(static_cast<Eigen::Index>(idx.size()));
            for (size_t k = 0; k < idx.size(); ++k) {
                cols(idx[k], static_cast<int>(k)) = 1.0;
                weights(static_cast<Eigen::Index>(k)) = st.rho(idx[k], idx[k]).real();
            }
        } else {
            density_mode = true;
            rho = st.rho;
        }
    }

    // exp(−i H(t_mid) dt) applied to b
    void step_block(double t_mid, double dt, Matrix& b) {
        const double mw_env = prog.mw_envelope.value(t_mid);
        const double grad_env = prog.gradient_envelope.value(t_mid);
        const double shift = shift_value();
        const LockedParams p =
            locked_params(prog.couplings, t_mid, mw_env, grad_env, shift);
        auto apply = [&](const Matrix& x, Matrix& y) {
            apply_locked(p, sq, space.fock_dim, x, y);
        };
        expv(apply, norm_bound(mw_env, grad_env), shift, dt, b, ws_term, ws_tmp);
    }

    void substep(double t_mid, double dt) {
        if (!density_mode) {
            step_block(t_mid, dt, cols);
        } else {
            step_block(t_mid, dt, rho);          // U ρ
            ws_adj = rho.adjoint();
            step_block(t_mid, dt, ws_adj);       // U (Uρ)†
            rho = ws_adj.adjoint();              // U ρ U†
        }
    }

    void apply_matrix(const Matrix& u) {
        if (!density_mode) {
            ws_tmp.noalias() = u * cols;
            cols.swap(ws_tmp);
        } else {
            ws_tmp.noalias() = u * rho;
            rho.noalias() = ws_tmp * u.adjoint();
        }
    }

    double top_population() const {
        const int n = space.fock_dim;
        double p = 0.0;
        for (int spin = 0; spin < 2; ++spin)
            for (int k = n - 2; k < n; ++k) {
                const int i = space.index(spin, k);
                if (!density_mode) {
                    for (int c = 0; c < cols.cols(); ++c)
                        p += weights(c) * std::norm(cols(i, c));
                } else {
                    p += rho(i, i).real();
                }
            }
        return p;
    }

    void check_guard(double t) const {
        const double p = top_population();
        if (p >= settings.truncation_guard) {
            std::ostringstream msg;
            msg << "truncation guard: top two Fock levels hold " << p
                << " >= " << settings.truncation_guard << " at t = " << t << " s"
                << " (fock_dim " << space.fock_dim << ")";
            throw TruncationError(msg.str(), t, p);
        }
    }

    void advance_plain(double t0, double t1) {
        if (t1 <= t0) return;
        const int n = std::max(1, static_cast<int>(std::ceil((t1 - t0) / max_step)));
        const double dt = (t1 - t0) / n;
        for (int j = 0; j < n; ++j) {
            substep(t0 + (j + 0.5) * dt, dt);
            check_guard(t0 + (j + 1) * dt);
        }
    }

    void ensure_cache(double t_anchor, double mw_env, double grad_env) {
        if (cache_valid && cache_mw_env == mw_env && cache_grad_env == grad_env) return;
        const double tp = period();
        const int nsub = std::max(1, static_cast<int>(std::ceil(tp / max_step)));
        const double dt = tp / nsub;
        u_period = Matrix::Identity(space.dim(), space.dim());
        const double shift = shift_value();
        for (int j = 0; j < nsub; ++j) {
            const double t_mid = t_anchor + (j + 0.5) * dt;
            const LockedParams p =
                locked_params(prog.couplings, t_mid, mw_env, grad_env, shift);
            auto apply = [&](const Matrix& x, Matrix& y) {
                apply_locked(p, sq, space.fock_dim, x, y);
            };
            expv(apply, norm_bound(mw_env, grad_env), shift, dt, u_period, ws_term, ws_tmp);
        }
        cache_valid = true;
        cache_mw_env = mw_env;
        cache_grad_env = grad_env;
    }

    // advance across [t0, t1] using the plateau cache where the envelopes
    // are flat, resolving ramps substep by substep
    void advance(double t0, double t1) {
        if (t1 <= t0) return;
        const auto mw_c = prog.mw_envelope.constant_on(t0, t1);
        const auto gr_c = prog.gradient_envelope.constant_on(t0, t1);
        if (!mw_c || !gr_c) {
            // split at envelope breakpoints, then resolve ramps plainly
            std::vector<double> bps;
            for (const PulseEnvelope* e : {&prog.mw_envelope, &prog.gradient_envelope})
                for (double b : {e->ramp_time, e->ramp_time + e->plateau_time, e->total()})
                    if (b > t0 + 1e-15 && b < t1 - 1e-15) bps.push_back(b);
            if (bps.empty()) {
                advance_plain(t0, t1);
                return;
            }
            std::sort(bps.begin(), bps.end());
            double a = t0;
            for (double b : bps) {
                advance(a, b);
                a = b;
            }
            advance(a, t1);
            return;
        }
        const double tp = period();
        if (tp <= 0.0) {
            // static Hamiltonian on this piece: the midpoint rule is exact
            substep(0.5 * (t0 + t1), t1 - t0);
            check_guard(t1);
            return;
        }
        // period grid anchored at t = 0 so one cached propagator serves the
        // whole plateau
        const double a1 = std::ceil(t0 / tp - 1e-9) * tp;
        const double b1 = std::floor(t1 / tp + 1e-9) * tp;
        const long full = std::lround((b1 - a1) / tp);
        if (full < 2) {
            advance_plain(t0, t1);
            return;
        }
        advance_plain(t0, a1);
        ensure_cache(a1, *mw_c, *gr_c);
        for (long k = 0; k < full; ++k) {
            apply_matrix(u_period);
            check_guard(a1 + (k + 1) * tp);
        }
        advance_plain(b1, t1);
    }

    double p_up() const {
        const int n = space.fock_dim;
        double p = 0.0;
        if (!density_mode) {
            for (int c = 0; c < cols.cols(); ++c)
                for (int k = 0; k < n; ++k)
                    p += weights(c) * std::norm(cols(space.index(1, k), c));
        } else {
            for (int k = 0; k < n; ++k)
                p += rho(space.index(1, k), space.index(1, k)).real();
        }
        return std::clamp(p, 0.0, 1.0);
    }

    double mean_n() const {
        const int n = space.fock_dim;
        double m = 0.0;
        if (!density_mode) {
            for (int c = 0; c < cols.cols(); ++c)
                for (int spin = 0; spin < 2; ++spin)
                    for (int k = 0; k < n; ++k)
                        m += k * weights(c) * std::norm(cols(space.index(spin, k), c));
        } else {
            for (int spin = 0; spin < 2; ++spin)
                for (int k = 0; k < n; ++k)
                    m += k * rho(space.index(spin, k), space.index(spin, k)).real();
        }
        return std::max(m, 0.0);
    }

    // back to the interaction frame of rotating_frame_hamiltonian:
    // ψ = R(t)φ with R = exp(−i δ t σz/2)
    QuantumState final_state(double t, bool want_density) {
        const int n = space.fock_dim;
        Vector r(space.dim());
        const Complex up = std::exp(-kI * (0.5 * prog.couplings.delta * t));
        for (int k = 0; k < n; ++k) {
            r(space.index(0, k)) = std::conj(up);
            r(space.index(1, k)) = up;
        }
        if (!density_mode && cols.cols() == 1 && !want_density) {
            Vector psi = r.asDiagonal() * cols.col(0);
            psi /= psi.norm();
            return QuantumState::make_pure(space, std::move(psi));
        }
        Matrix out;
        if (!density_mode) {
            out = cols * weights.asDiagonal() * cols.adjoint();
        } else {
            out = rho;
        }
        out = r.asDiagonal() * out * r.asDiagonal().inverse();
        out = 0.5 * (out + out.adjoint().eval()); // strip roundoff skew
        out /= out.trace().real();
        return QuantumState::make_density(space, std::move(out));
    }
};

void validate_program(const DriveProgram& prog) {
    if (prog.duration <= 0) throw ConstraintError("propagate: duration must be > 0");
    if (prog.duration < prog.mw_envelope.total() - 1e-15 ||
        prog.duration < prog.gradient_envelope.total() - 1e-15)
        throw ConstraintError("propagate: duration shorter than an envelope");
}

double resolve_max_step(const model::Couplings& c, const PropagationSettings& s) {
    const double bound = recommended_max_step(c, 20.0);
    if (s.max_step <= 0.0) return bound;
    if (s.max_step > bound * (1.0 + 1e-9)) {
        std::ostringstream msg;
        msg << "max_step " << s.max_step << " s exceeds (2π/ω_fastest)/20 = " << bound;
        throw StepSizeError(msg.str());
    }
    return s.max_step;
}

std::vector<double> default_samples(double duration, int samples) {
    const int n = std::max(2, samples);
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = duration * i / (n - 1);
    return t;
}

} // namespace

double fastest_angular_frequency(const model::Couplings& c) {
    return std::max({2.0 * std::abs(c.omega_gdrive), std::abs(c.omega_r - c.omega_gdrive),
                     std::abs(c.delta), std::abs(c.omega_mu), 2.0 * std::abs(c.omega_z)});
}

double recommended_max_step(const model::Couplings& c, double oversample) {
    const double wf = fastest_angular_frequency(c);
    if (wf <= 0.0) return 1e300;
    return kTwoPi / wf / oversample;
}

EvolutionRecord propagate(const DriveProgram& program, const qcore::QuantumState& initial,
                          const PropagationSettings& settings) {
    return propagate(program, initial, settings,
                     default_samples(program.duration, settings.samples));
}

EvolutionRecord propagate(const DriveProgram& program, const qcore::QuantumState& initial,
                          const PropagationSettings& settings,
                          std::vector<double> sample_times) {
    validate_program(program);
    if (sample_times.empty()) sample_times = {program.duration};
    for (size_t i = 0; i < sample_times.size(); ++i) {
        if (sample_times[i] < 0 || sample_times[i] > program.duration + 1e-15)
            throw ConstraintError("propagate: sample time outside [0, duration]");
        if (i > 0 && sample_times[i] <= sample_times[i - 1])
            throw ConstraintError("propagate: sample times must be strictly increasing");
    }

    Engine eng(program, settings, initial.space,
               resolve_max_step(program.couplings, settings));
    eng.load_initial(initial);

    EvolutionRecord rec{{}, {}, {}, initial};
    double t = 0.0;
    for (double ts : sample_times) {
        eng.advance(t, ts);
        t = ts;
        rec.times.push_back(ts);
        rec.p_up.push_back(eng.p_up());
        rec.mean_n.push_back(eng.mean_n());
    }
    eng.advance(t, program.duration);
    rec.final_state = eng.final_state(program.duration, !initial.is_pure());
    return rec;
}

EvolutionRecord evolve_density_sequence(const std::vector<SequenceStep>& steps,
                                        const qcore::QuantumState& initial,
                                        const PropagationSettings& settings) {
    QuantumState state = initial.to_density();
    EvolutionRecord rec{{}, {}, {}, state};
    double offset = 0.0;
    for (size_t i = 0; i < steps.size(); ++i) {
        try {
            if (std::holds_alternative<RepumpMarker>(steps[i])) {
                state = qcore::reset_spin_down(state);
                rec.times.push_back(offset);
                rec.p_up.push_back(qcore::measure_up(state));
                rec.mean_n.push_back(qcore::mean_phonon(state));
                continue;
            }
            const auto& prog = std::get<DriveProgram>(steps[i]);
            EvolutionRecord r = propagate(prog, state, settings);
            for (size_t k = 0; k < r.times.size(); ++k) {
                rec.times.push_back(offset + r.times[k]);
                rec.p_up.push_back(r.p_up[k]);
                rec.mean_n.push_back(r.mean_n[k]);
            }
            offset += prog.duration;
            state = r.final_state;
        } catch (const TruncationError& e) {
            std::ostringstream msg;
            msg << "sequence step " << i << ": " << e.what();
            throw TruncationError(msg.str(), e.time, e.population);
        }
    }
    rec.final_state = state;
    return rec;
}

EvolutionRecord propagate_lab(const DriveProgram& program, double omega0_sim,
                              const qcore::QuantumState& initial,
                              const PropagationSettings& settings) {
    validate_program(program);
    if (!initial.is_pure())
        throw ConstraintError("propagate_lab: pure states only");
    const model::Couplings& c = program.couplings;
    const double wf = std::max({omega0_sim + std::abs(c.delta),
                                2.0 * std::abs(c.omega_gdrive), c.omega_r,
                                c.omega_mu, fastest_angular_frequency(c)});
    const double bound_dt = kTwoPi / wf / 20.0;
    double dt_max = settings.max_step > 0 ? settings.max_step : bound_dt;
    if (dt_max > bound_dt * (1.0 + 1e-9))
        throw StepSizeError("propagate_lab: max_step too coarse for the lab-frame drive");

    const HilbertSpace space = initial.space;
    const int n = space.fock_dim;
    std::vector<double> sq(n + 1);
    for (int k = 0; k <= n; ++k) sq[k] = std::sqrt(static_cast<double>(k));
    const double shift = c.omega_r * 0.5 * (n - 1);

    Matrix cols = initial.psi;
    Matrix term, tmp;
    auto sample_times = default_samples(program.duration, settings.samples);

    EvolutionRecord rec{{}, {}, {}, initial};
    double t = 0.0;
    auto advance_to = [&](double t1) {
        if (t1 <= t) return;
        const int nstep = std::max(1, static_cast<int>(std::ceil((t1 - t) / dt_max)));
        const double dt = (t1 - t) / nstep;
        for (int j = 0; j < nstep; ++j) {
            const double tm = t + (j + 0.5) * dt;
            LabParams p;
            p.omega0 = omega0_sim;
            p.omega_r = c.omega_r;
            p.grad = 2.0 * c.omega_g * program.gradient_envelope.value(tm) *
                     std::cos(c.omega_gdrive * tm + c.gradient_phase);
            p.mw = 2.0 * c.omega_mu * program.mw_envelope.value(tm) *
                   std::cos((omega0_sim + c.delta) * tm + c.mw_phase);
            p.shift = shift;
            auto apply = [&](const Matrix& x, Matrix& y) { apply_lab(p, sq, n, x, y); };
            const double bound = 0.5 * omega0_sim + c.omega_r * 0.5 * (n - 1) +
                                 4.0 * std::abs(p.grad) * sq[n] + std::abs(p.mw);
            expv(apply, bound, shift, dt, cols, term, tmp);
        }
        t = t1;
    };
    for (double ts : sample_times) {
        advance_to(ts);
        double pu = 0.0, mn = 0.0;
        for (int k = 0; k < n; ++k) pu += std::norm(cols(space.index(1, k), 0));
        for (int spin = 0; spin < 2; ++spin)
            for (int k = 0; k < n; ++k)
                mn += k * std::norm(cols(space.index(spin, k), 0));
        rec.times.push_back(ts);
        rec.p_up.push_back(std::clamp(pu, 0.0, 1.0));
        rec.mean_n.push_back(mn);
    }
    advance_to(program.duration);
    Vector psi = cols.col(0);
    psi /= psi.norm();
    rec.final_state = QuantumState::make_pure(space, std::move(psi));
    return rec;
}

} // namespace iongrad::dynamics
