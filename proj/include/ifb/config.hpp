#pragma once

// Run configuration: JSON file schema, defaults and manifest round-trip.
//
// {
//   "model":      { "C", "v_h", "v_theta", "v_reset", "v_L", "v_T", "g_L", "g_T",
//                   "I0", "I1", "f_hz", "tau_h_minus", "tau_h_plus", "h_equation" },
//   "simulation": { "v0", "h0", "noise", "dt_ms", "duration_ms", "seed",
//                   "record_trajectory", "record_stride" },
//   "analysis":   { "isi_threshold_ms", "binwidth_ms", "transient_ms", "trough_window_ms": [lo, hi] },
//   "ensemble":   { "noise_values", "trials" },
//   "grid":       { "v0_range", "h0_range", "v0_resolution", "h0_resolution" },
//   "output":     { "dir", "json_manifest" },
//   "workers": n
// }
//
// Every key is optional; unknown keys are rejected. Manifests written by the
// CLI carry two extra top-level keys, "toolkit_version" and "command", which
// are accepted and ignored on input.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "ifb/bursts.hpp"
#include "ifb/experiments.hpp"
#include "ifb/integrator.hpp"
#include "ifb/model.hpp"

namespace ifb {

inline constexpr const char* toolkit_version = IFB_VERSION;

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Command { simulate, sweep_noise, sweep_grid, isih };

std::string to_string(Command command);

struct RunConfig {
    ModelParameters model;

    double v0 = -45.0;
    double h0 = 0.045;
    double noise = 0.0;
    double dt = 0.02;
    // Unset means the command default (see default_duration).
    std::optional<double> duration;
    std::uint64_t seed = 0;
    bool record_trajectory = false;
    int record_stride = 10;

    AnalysisSettings analysis;

    std::vector<double> noise_values{0.0};
    int trials = 300;

    double v0_lo = -90.0, v0_hi = -35.0;
    double h0_lo = 0.0, h0_hi = 1.0;
    double v0_resolution = 0.5;
    double h0_resolution = 0.01;

    std::string out_dir = ".";
    bool json_manifest = true;
    unsigned workers = 0;

    bool operator==(const RunConfig&) const = default;

    // 3 s for a single trace, 30 s per ensemble trial, 40 s per grid cell.
    static double default_duration(Command command);
    double duration_for(Command command) const { return duration.value_or(default_duration(command)); }

    // Throws ConfigError on any invalid setting.
    void validate() const;

    SimulationSettings simulation_settings(Command command) const;
    EnsembleSpec ensemble_spec(Command command) const;
    GridSpec grid_spec() const;
};

RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

// Full effective configuration; parse_config(to_json(c)) == c.
nlohmann::json to_json(const RunConfig& config);

}  // namespace ifb
