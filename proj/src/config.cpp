// config.cpp

#include "iongrad/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "iongrad/constants.hpp"
#include "iongrad/table.hpp"

namespace iongrad::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg, const std::string& path) {
    throw ConfigError(msg + " (at " + (path.empty() ? "<root>" : path) + ")", path);
}

size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (size_t j = 1; j <= b.size(); ++j)
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1,
                               prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

// strict object access: every present key must be known
void check_keys(const json& obj, const std::vector<std::string>& known,
                const std::string& path) {
    if (!obj.is_object()) fail("expected an object", path);
    for (const auto& [key, _] : obj.items()) {
        if (std::find(known.begin(), known.end(), key) != known.end()) continue;
        std::string best;
        size_t best_d = 4;
        for (const auto& k : known) {
            const size_t d = edit_distance(key, k);
            if (d < best_d) {
                best_d = d;
                best = k;
            }
        }
        std::string msg = "unknown key '" + key + "'";
        if (!best.empty()) msg += "; did you mean '" + best + "'?";
        fail(msg, path + "/" + key);
    }
}

double get_num(const json& obj, const std::string& key, const std::string& path,
               std::optional<double> def = std::nullopt) {
    if (!obj.contains(key)) {
        if (def) return *def;
        fail("missing required key '" + key + "'", path);
    }
    if (!obj[key].is_number()) fail("expected a number", path + "/" + key);
    return obj[key].get<double>();
}

std::string get_str(const json& obj, const std::string& key, const std::string& path,
                    std::optional<std::string> def = std::nullopt) {
    if (!obj.contains(key)) {
        if (def) return *def;
        fail("missing required key '" + key + "'", path);
    }
    if (!obj[key].is_string()) fail("expected a string", path + "/" + key);
    return obj[key].get<std::string>();
}

// a list of numbers, or {"start": a, "stop": b, "count": n} (inclusive
// linear spacing), or {"start": a, "stop": b, "step": s}
std::vector<double> get_values(const json& v, const std::string& path) {
    std::vector<double> out;
    if (v.is_array()) {
        for (const auto& e : v) {
            if (!e.is_number()) fail("expected numbers", path);
            out.push_back(e.get<double>());
        }
    } else if (v.is_object()) {
        check_keys(v, {"start", "stop", "count", "step"}, path);
        const double a = get_num(v, "start", path), b = get_num(v, "stop", path);
        if (v.contains("count")) {
            const int n = static_cast<int>(get_num(v, "count", path));
            if (n < 1) fail("count must be >= 1", path + "/count");
            for (int i = 0; i < n; ++i)
                out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
        } else {
            const double s = get_num(v, "step", path);
            if (s <= 0) fail("step must be > 0", path + "/step");
            for (double x = a; x <= b + 0.5 * s; x += s) out.push_back(x);
        }
    } else {
        fail("expected a list or a start/stop range", path);
    }
    for (double x : out)
        if (!std::isfinite(x)) fail("values must be finite", path);
    return out;
}

dynamics::PulseEnvelope parse_envelope(const json& e, const std::string& path) {
    check_keys(e, {"kind", "ramp_time_s", "plateau_time_s"}, path);
    const std::string kind = get_str(e, "kind", path, "rectangular");
    const double ramp = get_num(e, "ramp_time_s", path, 0.0);
    const double plateau = get_num(e, "plateau_time_s", path, 0.0);
    if (ramp < 0 || plateau < 0) fail("negative envelope time", path);
    try {
        if (kind == "rectangular")
            return dynamics::PulseEnvelope::rectangular(plateau, ramp);
        if (kind == "blackman") return dynamics::PulseEnvelope::blackman(ramp, plateau);
    } catch (const ConstraintError& err) {
        fail(err.what(), path);
    }
    fail("kind must be 'rectangular' or 'blackman'", path + "/kind");
}

} // namespace

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        size_t line = 1, col = 1;
        for (size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::ostringstream msg;
        msg << "config parse error at line " << line << ", column " << col << ": "
            << e.what();
        throw ConfigError(msg.str());
    }

    RunConfig rc;
    check_keys(j, {"trap", "drive", "envelope", "gradient_envelope", "settings",
                   "experiment", "output"},
               "");
    if (!j.contains("trap")) fail("missing required key 'trap'", "");
    if (!j.contains("drive")) fail("missing required key 'drive'", "");
    if (!j.contains("experiment")) fail("missing required key 'experiment'", "");

    // trap
    {
        const json& t = j["trap"];
        check_keys(t,
                   {"ion_mass_u", "ion_mass_kg", "mode_freqs_hz", "qubit_freq_hz",
                    "field_sensitivity_hz_per_t", "static_field_t"},
                   "trap");
        auto& trap = rc.base.trap;
        if (t.contains("ion_mass_kg"))
            trap.ion_mass = get_num(t, "ion_mass_kg", "trap");
        else
            trap.ion_mass =
                get_num(t, "ion_mass_u", "trap") * constants::atomic_mass_unit;
        if (trap.ion_mass <= 0) fail("ion mass must be > 0", "trap");
        if (!t.contains("mode_freqs_hz") || !t["mode_freqs_hz"].is_object())
            fail("mode_freqs_hz must be an object of mode -> Hz", "trap/mode_freqs_hz");
        for (const auto& [mode, f] : t["mode_freqs_hz"].items()) {
            if (!f.is_number() || f.get<double>() <= 0)
                fail("mode frequency must be a positive number",
                     "trap/mode_freqs_hz/" + mode);
            trap.mode_freqs[mode] = f.get<double>();
        }
        trap.qubit_freq = get_num(t, "qubit_freq_hz", "trap", 0.0);
        trap.field_sensitivity = get_num(t, "field_sensitivity_hz_per_t", "trap");
        trap.static_field = get_num(t, "static_field_t", "trap", 0.0);
    }

    // drive
    {
        const json& d = j["drive"];
        check_keys(d,
                   {"mode", "gradient_freq_hz", "gradient_projection_t_per_m",
                    "field_at_ion_t", "mw_rabi_hz", "mw_detuning_hz",
                    "gradient_phase_rad", "mw_phase_rad"},
                   "drive");
        auto& dr = rc.base.drive;
        dr.mode = get_str(d, "mode", "drive");
        if (!rc.base.trap.mode_freqs.count(dr.mode))
            fail("mode '" + dr.mode + "' not in trap.mode_freqs_hz", "drive/mode");
        dr.gradient_freq = get_num(d, "gradient_freq_hz", "drive", 0.0);
        if (dr.gradient_freq < 0) fail("gradient frequency must be >= 0", "drive");
        dr.gradient_projection = get_num(d, "gradient_projection_t_per_m", "drive", 0.0);
        dr.field_at_ion = get_num(d, "field_at_ion_t", "drive", 0.0);
        dr.mw_rabi = get_num(d, "mw_rabi_hz", "drive", 0.0);
        if (dr.mw_rabi < 0) fail("microwave Rabi frequency must be >= 0", "drive");
        dr.mw_detuning = get_num(d, "mw_detuning_hz", "drive", 0.0);
        dr.gradient_phase = get_num(d, "gradient_phase_rad", "drive", 0.0);
        dr.mw_phase = get_num(d, "mw_phase_rad", "drive", 0.0);
    }

    rc.base.mw_envelope = j.contains("envelope")
                              ? parse_envelope(j["envelope"], "envelope")
                              : dynamics::PulseEnvelope::rectangular(0.0);
    rc.base.gradient_envelope =
        j.contains("gradient_envelope")
            ? parse_envelope(j["gradient_envelope"], "gradient_envelope")
            : rc.base.mw_envelope;

    // settings
    if (j.contains("settings")) {
        const json& s = j["settings"];
        check_keys(s,
                   {"max_step_s", "samples", "truncation_guard", "fock_dim",
                    "initial_nbar"},
                   "settings");
        rc.base.settings.max_step = get_num(s, "max_step_s", "settings", 0.0);
        if (rc.base.settings.max_step < 0) fail("max_step_s must be >= 0", "settings");
        rc.base.settings.samples =
            static_cast<int>(get_num(s, "samples", "settings", 2.0));
        if (rc.base.settings.samples < 2) fail("samples must be >= 2", "settings");
        rc.base.settings.truncation_guard =
            get_num(s, "truncation_guard", "settings", 1e-6);
        if (rc.base.settings.truncation_guard <= 0 ||
            rc.base.settings.truncation_guard >= 1)
            fail("truncation_guard must be in (0,1)", "settings");
        rc.base.fock_dim = static_cast<int>(get_num(s, "fock_dim", "settings", 16.0));
        if (rc.base.fock_dim < 2) fail("fock_dim must be >= 2", "settings");
        rc.base.initial_nbar = get_num(s, "initial_nbar", "settings", 0.0);
        if (rc.base.initial_nbar < 0) fail("initial_nbar must be >= 0", "settings");
    }

    // experiment
    {
        const json& e = j["experiment"];
        check_keys(e,
                   {"type", "detunings_hz", "durations_s", "field_values_t", "orders",
                    "mw_rabi_values_hz", "modes", "pulse_s", "pulses",
                    "analysis_pulse_s"},
                   "experiment");
        auto& ex = rc.experiment;
        ex.type = get_str(e, "type", "experiment");
        const std::vector<std::string> types = {"spectroscopy", "rabi",      "bessel",
                                                "sideband-char", "cool",
                                                "thermometry"};
        if (std::find(types.begin(), types.end(), ex.type) == types.end())
            fail("unknown experiment type '" + ex.type + "'", "experiment/type");
        ex.pulse = get_num(e, "pulse_s", "experiment",
                           ex.type == "cool" ? 150e-6 : 500e-6);
        if (ex.pulse <= 0) fail("pulse_s must be > 0", "experiment");
        ex.pulses = static_cast<int>(get_num(e, "pulses", "experiment", 12.0));
        ex.analysis_pulse = get_num(e, "analysis_pulse_s", "experiment", 0.0);
        if (e.contains("orders")) {
            for (const auto& o : e["orders"]) {
                if (!o.is_number_integer()) fail("orders must be integers", "experiment/orders");
                ex.orders.push_back(o.get<int>());
            }
        }
        if (e.contains("modes")) {
            for (const auto& m : e["modes"]) {
                if (!m.is_string()) fail("modes must be strings", "experiment/modes");
                const auto mode = m.get<std::string>();
                if (!rc.base.trap.mode_freqs.count(mode))
                    fail("mode '" + mode + "' not in trap.mode_freqs_hz",
                         "experiment/modes");
                ex.modes.push_back(mode);
            }
        }
        if (ex.type == "spectroscopy" && e.contains("detunings_hz"))
            ex.values = get_values(e["detunings_hz"], "experiment/detunings_hz");
        if (ex.type == "rabi") {
            if (!e.contains("durations_s"))
                fail("rabi needs durations_s", "experiment");
            ex.values = get_values(e["durations_s"], "experiment/durations_s");
        }
        if (ex.type == "bessel") {
            if (!e.contains("field_values_t"))
                fail("bessel needs field_values_t", "experiment");
            ex.values = get_values(e["field_values_t"], "experiment/field_values_t");
            if (ex.orders.empty()) ex.orders = {0, 1, 2, 3, 4, 5};
        }
        if (ex.type == "sideband-char") {
            if (!e.contains("mw_rabi_values_hz"))
                fail("sideband-char needs mw_rabi_values_hz", "experiment");
            ex.values = get_values(e["mw_rabi_values_hz"], "experiment/mw_rabi_values_hz");
        }
    }

    // output
    if (j.contains("output")) {
        check_keys(j["output"], {"path"}, "output");
        rc.output_path = get_str(j["output"], "path", "output", "out.csv");
    }

    // physics warnings (hard errors only where the experiment needs the bound)
    {
        const auto& d = rc.base.drive;
        const double gap =
            rc.base.trap.mode_freqs.at(d.mode) - d.gradient_freq;
        if (2.0 * d.mw_rabi >= std::abs(gap))
            rc.warnings.push_back(
                "2*mw_rabi >= |mode_freq - gradient_freq|: no real sideband "
                "resonance at these drive strengths");
    }

    json semantic = j;
    semantic.erase("output");
    rc.config_hash = fnv1a(semantic.dump());
    return rc;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

} // namespace iongrad::cli
