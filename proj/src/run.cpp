// run.cpp

#include "iongrad/run.hpp"

#include <cmath>
#include <sstream>

namespace iongrad::cli {

namespace {

std::string hash_hex(uint64_t h) {
    std::ostringstream ss;
    ss << std::hex << h;
    return ss.str();
}

void base_metadata(ResultTable& t, const RunConfig& rc) {
    t.metadata.emplace_back("tool", tool_version());
    t.metadata.emplace_back("config_hash", hash_hex(rc.config_hash));
    t.metadata.emplace_back("experiment", rc.experiment.type);
}

} // namespace

RunOutput run_experiment(const RunConfig& rc) {
    RunOutput out;
    ResultTable& t = out.table;
    base_metadata(t, rc);
    const auto& ex = rc.experiment;

    if (ex.type == "spectroscopy") {
        experiments::ScanSpec spec{rc.base, "mw_detuning", ex.values};
        if (spec.values.empty())
            throw ConfigError("spectroscopy: no detunings given", "experiment/detunings_hz");
        const auto spectrum =
            ex.modes.empty()
                ? experiments::spectroscopy(spec, ex.pulse)
                : experiments::spectroscopy_overlay(spec, ex.modes, ex.pulse);
        t.columns = {"mw_detuning", "p_up"};
        t.units = {"Hz", "1"};
        for (size_t i = 0; i < spectrum.detunings_hz.size(); ++i) {
            t.add_row({spectrum.detunings_hz[i], spectrum.p_up[i]});
            if (!spectrum.notes[i].empty())
                out.notes.push_back("point " + format_number(spectrum.detunings_hz[i]) +
                                    " Hz: " + spectrum.notes[i]);
        }
        out.annotations = spectrum.annotations;
    } else if (ex.type == "rabi") {
        const auto scan = experiments::rabi_timescan(rc.base, ex.values);
        t.columns = {"duration", "p_up"};
        t.units = {"s", "1"};
        for (size_t i = 0; i < scan.times.size(); ++i)
            t.add_row({scan.times[i], scan.p_up[i]});
        try {
            const auto fit = experiments::fit_rabi(scan);
            t.metadata.emplace_back("fit_frequency_hz",
                                    format_number(fit.frequency / (2.0 * M_PI)));
            t.metadata.emplace_back("fit_amplitude", format_number(fit.amplitude));
            t.metadata.emplace_back("fit_rms_residual",
                                    format_number(fit.rms_residual));
        } catch (const FitError& e) {
            out.notes.push_back(std::string("rabi fit skipped: ") + e.what());
        }
    } else if (ex.type == "bessel") {
        const auto pts = experiments::bessel_scan(rc.base, ex.values, ex.orders);
        t.columns = {"argument", "order", "rabi_ratio"};
        t.units = {"1", "1", "1"};
        for (const auto& p : pts) {
            t.add_row({p.argument, static_cast<double>(p.order), p.ratio});
            if (!p.ok)
                out.notes.push_back("order " + std::to_string(p.order) + " argument " +
                                    format_number(p.argument) + ": " + p.note);
        }
    } else if (ex.type == "sideband-char") {
        const auto pts = experiments::sideband_characterization(rc.base, ex.values);
        t.columns = {"drive_ratio", "sideband_ratio", "resonance_ratio"};
        t.units = {"1", "1", "1"};
        for (const auto& p : pts) {
            t.add_row({p.drive_ratio, p.sb_ratio, p.res_ratio});
            if (!p.ok)
                out.notes.push_back("drive ratio " + format_number(p.drive_ratio) +
                                    ": " + p.note);
        }
    } else if (ex.type == "cool") {
        const auto res = experiments::cooling_run(rc.base, ex.pulses, ex.pulse,
                                                  ex.analysis_pulse);
        t.columns = {"pulse", "mean_n"};
        t.units = {"1", "1"};
        for (size_t i = 0; i < res.pulse_nbar.size(); ++i)
            t.add_row({static_cast<double>(i + 1), res.pulse_nbar[i]});
        t.metadata.emplace_back("final_nbar_direct", format_number(res.direct_nbar));
        t.metadata.emplace_back("final_nbar_thermometry",
                                format_number(res.thermo.nbar));
        t.metadata.emplace_back("sideband_ratio", format_number(res.thermo.ratio));
    } else if (ex.type == "thermometry") {
        const qcore::HilbertSpace space(rc.base.fock_dim);
        experiments::ScanBase b = rc.base;
        const auto state =
            b.initial_nbar > 0.0
                ? qcore::thermal_state(
                      space, b.initial_nbar,
                      std::clamp(0.25 * b.settings.truncation_guard, 1e-12, 0.1))
                : qcore::QuantumState::basis(space, 0, 0);
        const auto r = experiments::thermometry(state, b, ex.analysis_pulse);
        t.columns = {"ratio", "nbar", "p_up_rsb", "p_up_bsb"};
        t.units = {"1", "1", "1", "1"};
        t.add_row({r.ratio, r.nbar, r.p_rsb, r.p_bsb});
    } else {
        throw ConfigError("unknown experiment type '" + ex.type + "'",
                          "experiment/type");
    }
    return out;
}

} // namespace iongrad::cli
