// experiments.cpp

#include "iongrad/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "iongrad/constants.hpp"
#include "iongrad/parallel.hpp"

namespace iongrad::experiments {

namespace {

using dynamics::DriveProgram;
using dynamics::PulseEnvelope;
using model::Couplings;
using qcore::HilbertSpace;
using qcore::QuantumState;

constexpr double kTwoPi = constants::two_pi;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

PulseEnvelope fit_to_duration(const PulseEnvelope& e, double duration) {
    const double plateau = duration - 2.0 * e.ramp_time;
    if (plateau < -1e-15)
        throw ConstraintError("pulse shorter than its envelope ramps");
    PulseEnvelope out = e;
    out.plateau_time = std::max(plateau, 0.0);
    return out;
}

DriveProgram make_program(const ScanBase& base, const Couplings& c, double duration) {
    return {c, fit_to_duration(base.mw_envelope, duration),
            fit_to_duration(base.gradient_envelope, duration), duration};
}

QuantumState make_initial(const ScanBase& base, HilbertSpace space) {
    if (base.initial_nbar <= 0.0) return QuantumState::basis(space, 0, 0);
    const double tail =
        std::clamp(0.25 * base.settings.truncation_guard, 1e-12, 0.1);
    return qcore::thermal_state(space, base.initial_nbar, tail);
}

// observable sampling points snapped to the gradient period so the recorded
// p_up is stroboscopic (free of intra-period micromotion)
std::vector<double> snapped_durations(double t_first, double t_last, int count,
                                      double gradient_freq_hz) {
    std::vector<double> out;
    const double tg = gradient_freq_hz > 0.0 ? 1.0 / gradient_freq_hz : 0.0;
    for (int k = 0; k < count; ++k) {
        double t = t_first + (t_last - t_first) * k / (count - 1);
        if (tg > 0.0 && t > tg) t = std::round(t / tg) * tg;
        if (out.empty() || t > out.back() * (1.0 + 1e-12)) out.push_back(t);
    }
    return out;
}

double final_p_up(const ScanBase& base, const Couplings& c, double duration) {
    const HilbertSpace space(base.fock_dim);
    const auto rec = dynamics::propagate(make_program(base, c, duration),
                                         make_initial(base, space), base.settings,
                                         {duration});
    return rec.p_up.back();
}

} // namespace

Spectrum spectroscopy(const ScanSpec& spec, double pulse_duration) {
    if (spec.swept_parameter != "mw_detuning")
        throw ConstraintError("spectroscopy: swept parameter must be mw_detuning");
    const int n = static_cast<int>(spec.values.size());
    Spectrum out;
    out.detunings_hz = spec.values;
    out.p_up.assign(n, kNaN);
    out.notes.assign(n, "");

    parallel_for(n, [&](int i) {
        try {
            ScanBase b = spec.base;
            b.drive.mw_detuning = spec.values[i];
            const Couplings c = model::derive_couplings(b.trap, b.drive);
            out.p_up[i] = final_p_up(b, c, pulse_duration);
        } catch (const std::exception& e) {
            out.notes[i] = e.what();
        }
    });

    const double fg = spec.base.drive.gradient_freq;
    const double fr = spec.base.trap.mode_freqs.at(spec.base.drive.mode);
    out.annotations.push_back({0.0, "carrier"});
    for (int m = 1; m <= 2; ++m)
        for (double s : {1.0, -1.0}) {
            std::ostringstream l;
            l << "gradient sideband m=" << (s > 0 ? "+" : "-") << m;
            out.annotations.push_back({s * m * fg, l.str()});
        }
    for (double s : {1.0, -1.0}) {
        out.annotations.push_back(
            {s * (fr - fg), "mode " + spec.base.drive.mode + " lower sideband"});
        out.annotations.push_back(
            {s * (fr + fg), "mode " + spec.base.drive.mode + " upper sideband"});
    }
    return out;
}

Spectrum spectroscopy_overlay(const ScanSpec& spec,
                              const std::vector<std::string>& modes,
                              double pulse_duration) {
    if (modes.empty()) throw ConstraintError("spectroscopy_overlay: no modes given");
    Spectrum out;
    std::vector<double> miss(spec.values.size(), 1.0);
    out.notes.assign(spec.values.size(), "");
    for (size_t k = 0; k < modes.size(); ++k) {
        ScanSpec s = spec;
        s.base.drive.mode = modes[k];
        Spectrum one = spectroscopy(s, pulse_duration);
        if (k == 0) {
            out.detunings_hz = one.detunings_hz;
            out.annotations = one.annotations;
        } else {
            for (const auto& a : one.annotations)
                if (a.label.rfind("mode ", 0) == 0) out.annotations.push_back(a);
        }
        for (size_t i = 0; i < miss.size(); ++i) {
            miss[i] *= 1.0 - one.p_up[i]; // NaN poisons the overlay, as intended
            if (!one.notes[i].empty())
                out.notes[i] += modes[k] + ": " + one.notes[i] + "; ";
        }
    }
    out.p_up.resize(miss.size());
    for (size_t i = 0; i < miss.size(); ++i) out.p_up[i] = 1.0 - miss[i];
    return out;
}

TimeScan rabi_timescan(const ScanBase& base, const std::vector<double>& durations) {
    if (durations.empty()) throw ConstraintError("rabi_timescan: no durations");
    for (size_t i = 0; i < durations.size(); ++i) {
        if (durations[i] <= 0)
            throw ConstraintError("rabi_timescan: durations must be positive");
        if (i > 0 && durations[i] <= durations[i - 1])
            throw ConstraintError("rabi_timescan: durations must be increasing");
    }
    const Couplings c = model::derive_couplings(base.trap, base.drive);
    const HilbertSpace space(base.fock_dim);
    TimeScan scan;
    scan.times = durations;
    if (base.mw_envelope.ramp_time == 0.0 && base.gradient_envelope.ramp_time == 0.0) {
        // unramped drives: p_up(t) inside one long pulse equals the final
        // p_up of a shorter pulse, so one propagation serves every duration
        const auto rec =
            dynamics::propagate(make_program(base, c, durations.back()),
                                make_initial(base, space), base.settings, durations);
        scan.p_up = rec.p_up;
        return scan;
    }
    scan.p_up.assign(durations.size(), 0.0);
    parallel_for(static_cast<int>(durations.size()), [&](int i) {
        scan.p_up[i] = final_p_up(base, c, durations[i]);
    });
    return scan;
}

RabiFit fit_rabi(const TimeScan& scan) { return fit_rabi(scan.times, scan.p_up); }

std::vector<BesselPoint> bessel_scan(const ScanBase& base,
                                     const std::vector<double>& field_values,
                                     const std::vector<int>& orders) {
    if (base.drive.gradient_freq <= 0.0)
        throw ConstraintError("bessel_scan: needs an oscillating gradient");
    const int nf = static_cast<int>(field_values.size());
    const int no = static_cast<int>(orders.size());
    std::vector<BesselPoint> out(static_cast<size_t>(nf) * no);

    parallel_for(nf * no, [&](int idx) {
        const int fi = idx / no, oi = idx % no;
        BesselPoint& pt = out[idx];
        pt.order = orders[oi];
        try {
            ScanBase b = base;
            b.drive.field_at_ion = field_values[fi];
            b.drive.mw_detuning = pt.order * b.drive.gradient_freq;
            const Couplings c = model::derive_couplings(b.trap, b.drive);
            pt.argument = 4.0 * c.omega_z / c.omega_gdrive;
            const double pred = std::abs(model::spinflip_rabi(c, pt.order));
            if (pred < 0.01 * c.omega_mu) {
                // near a Bessel null the oscillation is too slow to fit in
                // reasonable time; a small-angle probe p ≈ sin²(Ωt) suffices
                const double t1 = 0.5 * M_PI / (0.02 * c.omega_mu);
                const double tg = 1.0 / b.drive.gradient_freq;
                const double t = std::max(tg, std::round(t1 / tg) * tg);
                const double p = std::clamp(final_p_up(b, c, t), 0.0, 1.0);
                pt.ratio = std::asin(std::sqrt(p)) / (t * c.omega_mu);
            } else {
                const double span = 1.5 * M_PI / pred;
                const auto durations = snapped_durations(
                    span / 48.0, span, 48, b.drive.gradient_freq);
                const RabiFit f = fit_rabi(rabi_timescan(b, durations));
                pt.ratio = f.frequency / c.omega_mu;
            }
        } catch (const std::exception& e) {
            pt.ok = false;
            pt.ratio = kNaN;
            pt.note = e.what();
        }
    });
    return out;
}

std::vector<SidebandPoint> sideband_characterization(
    const ScanBase& base, const std::vector<double>& mw_rabi_values) {
    if (base.drive.field_at_ion != 0.0)
        throw ConstraintError("sideband_characterization: oscillating field must be nulled");
    if (base.initial_nbar > 0.0)
        throw ConstraintError("sideband_characterization: ground-state start required");
    const int n = static_cast<int>(mw_rabi_values.size());
    std::vector<SidebandPoint> out(n);

    parallel_for(n, [&](int i) {
        SidebandPoint& pt = out[i];
        try {
            ScanBase b = base;
            b.drive.mw_rabi = mw_rabi_values[i];
            b.drive.mw_detuning = 0.0;
            Couplings c = model::derive_couplings(b.trap, b.drive);
            const double gap = c.omega_r - c.omega_gdrive;
            pt.drive_ratio = 2.0 * c.omega_mu / gap;
            const double delta_pred =
                model::sideband_resonance_detuning(c, model::SidebandSign::blue);
            const double omega_pred = model::sideband_rabi(c, model::Branch::minus);
            if (omega_pred <= 0.0)
                throw ConstraintError("sideband_characterization: vanishing sideband rate");

            // locate the resonance with a local detuning scan at the π-time
            const double t_pi = M_PI / (2.0 * omega_pred);
            const double t_ramp = 2.0 * std::max(b.mw_envelope.ramp_time,
                                                 b.gradient_envelope.ramp_time);
            const double t_scan = std::max(t_pi, t_ramp);
            const int half = 4;
            std::vector<double> resp(2 * half + 1);
            for (int k = -half; k <= half; ++k) {
                b.drive.mw_detuning = (delta_pred + 0.5 * k * omega_pred) / kTwoPi;
                resp[k + half] = final_p_up(b, model::derive_couplings(b.trap, b.drive),
                                            t_scan);
            }
            int best = static_cast<int>(std::max_element(resp.begin(), resp.end()) -
                                        resp.begin());
            best = std::clamp(best, 1, 2 * half - 1);
            const double y0 = resp[best - 1], y1 = resp[best], y2 = resp[best + 1];
            const double denom = y0 - 2.0 * y1 + y2;
            const double frac = std::abs(denom) > 1e-15
                                    ? std::clamp(0.5 * (y0 - y2) / denom, -1.0, 1.0)
                                    : 0.0;
            const double delta_fit =
                delta_pred + 0.5 * (best - half + frac) * omega_pred;
            pt.res_ratio = delta_fit / gap;

            // Rabi fit on resonance
            b.drive.mw_detuning = delta_fit / kTwoPi;
            const double span = 1.5 * M_PI / omega_pred;
            const double t0 = std::max(span / 48.0, t_ramp * (1.0 + 1e-9));
            const auto durations =
                snapped_durations(t0, std::max(span, 2.0 * t0), 48,
                                  b.drive.gradient_freq);
            const RabiFit f = fit_rabi(
                rabi_timescan(b, durations));
            pt.sb_ratio = f.frequency / std::abs(c.omega_g);
        } catch (const std::exception& e) {
            pt.ok = false;
            pt.sb_ratio = pt.res_ratio = kNaN;
            pt.note = e.what();
        }
    });
    return out;
}

ThermometryResult thermometry(const qcore::QuantumState& state, const ScanBase& base,
                              double analysis_duration) {
    if (qcore::measure_up(state) > 1e-9)
        throw ConstraintError("thermometry: state must be spin-down polarized");
    if (base.drive.field_at_ion != 0.0)
        throw ConstraintError("thermometry: oscillating field must be nulled");
    ScanBase b = base;
    b.drive.mw_detuning = 0.0;
    Couplings c0 = model::derive_couplings(b.trap, b.drive);
    const double omega_sb = model::sideband_rabi(c0, model::Branch::minus);
    if (omega_sb <= 0.0) throw ConstraintError("thermometry: vanishing sideband rate");
    double tau = analysis_duration;
    if (tau <= 0.0) tau = M_PI / (2.0 * std::sqrt(2.0) * omega_sb);
    tau = std::max(tau, 2.0 * std::max(b.mw_envelope.ramp_time,
                                       b.gradient_envelope.ramp_time));

    auto pulse_p_up = [&](model::SidebandSign sign) {
        b.drive.mw_detuning = model::sideband_resonance_detuning(c0, sign) / kTwoPi;
        const Couplings c = model::derive_couplings(b.trap, b.drive);
        const auto rec = dynamics::propagate(make_program(b, c, tau), state,
                                             b.settings, {tau});
        return rec.p_up.back();
    };
    ThermometryResult r;
    r.p_rsb = pulse_p_up(model::SidebandSign::red);
    r.p_bsb = pulse_p_up(model::SidebandSign::blue);
    if (r.p_bsb < 1e-12)
        throw ConstraintError("thermometry: blue-sideband response below numerical floor, "
                              "ratio undefined");
    r.ratio = std::clamp(r.p_rsb / r.p_bsb, 0.0, 1.0 - 1e-12);
    r.nbar = r.ratio / (1.0 - r.ratio);
    return r;
}

CoolingResult cooling_run(const ScanBase& base, int pulses, double pulse_length,
                          double analysis_duration) {
    if (base.drive.field_at_ion != 0.0)
        throw ConstraintError("cooling_run: oscillating field must be nulled");
    if (pulses < 1 || pulse_length <= 0)
        throw ConstraintError("cooling_run: bad schedule");
    ScanBase b = base;
    b.drive.mw_detuning = 0.0;
    Couplings c0 = model::derive_couplings(b.trap, b.drive);
    b.drive.mw_detuning =
        model::sideband_resonance_detuning(c0, model::SidebandSign::red) / kTwoPi;
    const Couplings c = model::derive_couplings(b.trap, b.drive);

    const HilbertSpace space(b.fock_dim);
    const QuantumState initial = make_initial(b, space).to_density();
    const DriveProgram pulse = make_program(b, c, pulse_length);
    std::vector<dynamics::SequenceStep> steps;
    for (int i = 0; i < pulses; ++i) {
        steps.emplace_back(pulse);
        steps.emplace_back(dynamics::RepumpMarker{});
    }

    CoolingResult out;
    dynamics::PropagationSettings seq_settings = b.settings;
    seq_settings.samples = 2;
    out.record = dynamics::evolve_density_sequence(steps, initial, seq_settings);
    for (int i = 0; i < pulses; ++i)
        out.pulse_nbar.push_back(out.record.mean_n.at(3 * i + 2));
    out.direct_nbar = qcore::mean_phonon(out.record.final_state);
    out.thermo = thermometry(out.record.final_state, base, analysis_duration);
    return out;
}

} // namespace iongrad::experiments
