#include "ifb/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <string_view>

namespace ifb {

using nlohmann::json;

std::string to_string(Command command) {
    switch (command) {
        case Command::simulate: return "simulate";
        case Command::sweep_noise: return "sweep-noise";
        case Command::sweep_grid: return "sweep-grid";
        case Command::isih: return "isih";
    }
    return "unknown";
}

double RunConfig::default_duration(Command command) {
    switch (command) {
        case Command::simulate: return 3000.0;
        case Command::sweep_grid: return 40000.0;
        case Command::sweep_noise:
        case Command::isih: return 30000.0;
    }
    return 3000.0;
}

void RunConfig::validate() const {
    try {
        model.validate();
        analysis.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (!std::isfinite(v0)) throw ConfigError("v0 must be finite");
    if (!std::isfinite(h0) || h0 < 0.0 || h0 > 1.0) throw ConfigError("h0 must lie in [0, 1]");
    if (!std::isfinite(noise) || noise < 0) throw ConfigError("noise intensity must be non-negative");
    if (!std::isfinite(dt) || !(dt > 0)) throw ConfigError("dt must be positive");
    if (duration && (!std::isfinite(*duration) || !(*duration > 0))) throw ConfigError("duration must be positive");
    if (record_stride < 1) throw ConfigError("record_stride must be at least 1");
    if (noise_values.empty()) throw ConfigError("noise_values must not be empty");
    for (double D : noise_values) {
        if (!std::isfinite(D) || D < 0) throw ConfigError("noise_values must be non-negative");
    }
    if (trials < 1) throw ConfigError("trials must be at least 1");
    if (!(v0_resolution > 0) || !(h0_resolution > 0)) throw ConfigError("grid resolutions must be positive");
    if (!(v0_lo <= v0_hi) || !(h0_lo <= h0_hi)) throw ConfigError("grid ranges must be ordered");
    if (h0_lo < 0 || h0_hi > 1) throw ConfigError("grid h0 range must lie within [0, 1]");
    if (out_dir.empty()) throw ConfigError("output directory must not be empty");
}

SimulationSettings RunConfig::simulation_settings(Command command) const {
    SimulationSettings s;
    s.dt = dt;
    s.duration = duration_for(command);
    s.D = noise;
    s.seed = seed;
    s.record_trajectory = record_trajectory;
    s.record_stride = record_stride;
    return s;
}

EnsembleSpec RunConfig::ensemble_spec(Command command) const {
    EnsembleSpec spec;
    spec.v0 = v0;
    spec.h0 = h0;
    spec.D_values = noise_values;
    spec.n_trials = trials;
    spec.trial_duration = duration_for(command);
    spec.base_seed = seed;
    spec.transient_cutoff = analysis.transient_cutoff;
    spec.dt = dt;
    return spec;
}

GridSpec RunConfig::grid_spec() const {
    GridSpec spec;
    spec.v0_lo = v0_lo;
    spec.v0_hi = v0_hi;
    spec.h0_lo = h0_lo;
    spec.h0_hi = h0_hi;
    spec.v0_resolution = v0_resolution;
    spec.h0_resolution = h0_resolution;
    spec.D = noise;
    spec.duration = duration_for(Command::sweep_grid);
    spec.base_seed = seed;
    spec.transient_cutoff = analysis.transient_cutoff;
    spec.dt = dt;
    return spec;
}

namespace {

void reject_unknown(const json& object, std::string_view section, std::initializer_list<std::string_view> allowed) {
    if (!object.is_object()) throw ConfigError("'" + std::string(section) + "' must be an object");
    for (const auto& item : object.items()) {
        bool known = false;
        for (std::string_view key : allowed) known = known || item.key() == key;
        if (!known) throw ConfigError("unknown key '" + item.key() + "' in " + std::string(section));
    }
}

void read(const json& object, const char* key, double& out) {
    if (!object.contains(key)) return;
    const json& value = object.at(key);
    if (!value.is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
    out = value.get<double>();
}

void read(const json& object, const char* key, int& out) {
    if (!object.contains(key)) return;
    const json& value = object.at(key);
    if (!value.is_number_integer()) throw ConfigError(std::string("'") + key + "' must be an integer");
    out = value.get<int>();
}

void read(const json& object, const char* key, unsigned& out) {
    if (!object.contains(key)) return;
    const json& value = object.at(key);
    if (!value.is_number_unsigned()) throw ConfigError(std::string("'") + key + "' must be a non-negative integer");
    out = value.get<unsigned>();
}

void read(const json& object, const char* key, std::uint64_t& out) {
    if (!object.contains(key)) return;
    const json& value = object.at(key);
    if (!value.is_number_unsigned()) throw ConfigError(std::string("'") + key + "' must be a non-negative integer");
    out = value.get<std::uint64_t>();
}

void read(const json& object, const char* key, bool& out) {
    if (!object.contains(key)) return;
    const json& value = object.at(key);
    if (!value.is_boolean()) throw ConfigError(std::string("'") + key + "' must be a boolean");
    out = value.get<bool>();
}

void read(const json& object, const char* key, std::string& out) {
    if (!object.contains(key)) return;
    const json& value = object.at(key);
    if (!value.is_string()) throw ConfigError(std::string("'") + key + "' must be a string");
    out = value.get<std::string>();
}

void read_pair(const json& object, const char* key, double& lo, double& hi) {
    if (!object.contains(key)) return;
    const json& value = object.at(key);
    if (!value.is_array() || value.size() != 2 || !value[0].is_number() || !value[1].is_number())
        throw ConfigError(std::string("'") + key + "' must be a two-element numeric array");
    lo = value[0].get<double>();
    hi = value[1].get<double>();
}

}  // namespace

RunConfig parse_config(const json& doc) {
    reject_unknown(doc, "configuration",
                   {"model", "simulation", "analysis", "ensemble", "grid", "output", "workers", "toolkit_version", "command"});
    RunConfig c;

    if (doc.contains("model")) {
        const json& m = doc.at("model");
        reject_unknown(m, "model", {"C", "v_h", "v_theta", "v_reset", "v_L", "v_T", "g_L", "g_T", "I0", "I1", "f_hz",
                                    "tau_h_minus", "tau_h_plus", "h_equation"});
        read(m, "C", c.model.C);
        read(m, "v_h", c.model.v_h);
        read(m, "v_theta", c.model.v_theta);
        read(m, "v_reset", c.model.v_reset);
        read(m, "v_L", c.model.v_L);
        read(m, "v_T", c.model.v_T);
        read(m, "g_L", c.model.g_L);
        read(m, "g_T", c.model.g_T);
        read(m, "I0", c.model.I0);
        read(m, "I1", c.model.I1);
        read(m, "f_hz", c.model.f);
        read(m, "tau_h_minus", c.model.tau_h_minus);
        read(m, "tau_h_plus", c.model.tau_h_plus);
        std::string eq = std::string(to_string(c.model.h_equation));
        read(m, "h_equation", eq);
        try {
            c.model.h_equation = parse_h_equation(eq);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }

    if (doc.contains("simulation")) {
        const json& s = doc.at("simulation");
        reject_unknown(s, "simulation",
                       {"v0", "h0", "noise", "dt_ms", "duration_ms", "seed", "record_trajectory", "record_stride"});
        read(s, "v0", c.v0);
        read(s, "h0", c.h0);
        read(s, "noise", c.noise);
        read(s, "dt_ms", c.dt);
        if (s.contains("duration_ms")) {
            double d = 0.0;
            read(s, "duration_ms", d);
            c.duration = d;
        }
        read(s, "seed", c.seed);
        read(s, "record_trajectory", c.record_trajectory);
        read(s, "record_stride", c.record_stride);
    }

    if (doc.contains("analysis")) {
        const json& a = doc.at("analysis");
        reject_unknown(a, "analysis", {"isi_threshold_ms", "binwidth_ms", "transient_ms", "trough_window_ms"});
        read(a, "isi_threshold_ms", c.analysis.isi_threshold);
        read(a, "binwidth_ms", c.analysis.binwidth);
        read(a, "transient_ms", c.analysis.transient_cutoff);
        read_pair(a, "trough_window_ms", c.analysis.trough_window.lo, c.analysis.trough_window.hi);
    }

    if (doc.contains("ensemble")) {
        const json& e = doc.at("ensemble");
        reject_unknown(e, "ensemble", {"noise_values", "trials"});
        if (e.contains("noise_values")) {
            const json& values = e.at("noise_values");
            if (!values.is_array()) throw ConfigError("'noise_values' must be an array");
            c.noise_values.clear();
            for (const json& v : values) {
                if (!v.is_number()) throw ConfigError("'noise_values' must contain numbers");
                c.noise_values.push_back(v.get<double>());
            }
        }
        read(e, "trials", c.trials);
    }

    if (doc.contains("grid")) {
        const json& g = doc.at("grid");
        reject_unknown(g, "grid", {"v0_range", "h0_range", "v0_resolution", "h0_resolution"});
        read_pair(g, "v0_range", c.v0_lo, c.v0_hi);
        read_pair(g, "h0_range", c.h0_lo, c.h0_hi);
        read(g, "v0_resolution", c.v0_resolution);
        read(g, "h0_resolution", c.h0_resolution);
    }

    if (doc.contains("output")) {
        const json& o = doc.at("output");
        reject_unknown(o, "output", {"dir", "json_manifest"});
        read(o, "dir", c.out_dir);
        read(o, "json_manifest", c.json_manifest);
    }

    read(doc, "workers", c.workers);
    c.validate();
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("malformed config file '" + path + "': " + e.what());
    }
    return parse_config(doc);
}

json to_json(const RunConfig& c) {
    json simulation = {
        {"v0", c.v0},
        {"h0", c.h0},
        {"noise", c.noise},
        {"dt_ms", c.dt},
        {"seed", c.seed},
        {"record_trajectory", c.record_trajectory},
        {"record_stride", c.record_stride},
    };
    if (c.duration) simulation["duration_ms"] = *c.duration;

    return {
        {"model",
         {
             {"C", c.model.C},
             {"v_h", c.model.v_h},
             {"v_theta", c.model.v_theta},
             {"v_reset", c.model.v_reset},
             {"v_L", c.model.v_L},
             {"v_T", c.model.v_T},
             {"g_L", c.model.g_L},
             {"g_T", c.model.g_T},
             {"I0", c.model.I0},
             {"I1", c.model.I1},
             {"f_hz", c.model.f},
             {"tau_h_minus", c.model.tau_h_minus},
             {"tau_h_plus", c.model.tau_h_plus},
             {"h_equation", std::string(to_string(c.model.h_equation))},
         }},
        {"simulation", simulation},
        {"analysis",
         {
             {"isi_threshold_ms", c.analysis.isi_threshold},
             {"binwidth_ms", c.analysis.binwidth},
             {"transient_ms", c.analysis.transient_cutoff},
             {"trough_window_ms", {c.analysis.trough_window.lo, c.analysis.trough_window.hi}},
         }},
        {"ensemble", {{"noise_values", c.noise_values}, {"trials", c.trials}}},
        {"grid",
         {
             {"v0_range", {c.v0_lo, c.v0_hi}},
             {"h0_range", {c.h0_lo, c.h0_hi}},
             {"v0_resolution", c.v0_resolution},
             {"h0_resolution", c.h0_resolution},
         }},
        {"output", {{"dir", c.out_dir}, {"json_manifest", c.json_manifest}}},
        {"workers", c.workers},
    };
}

}  // namespace ifb
