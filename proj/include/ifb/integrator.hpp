#pragma once

// Fixed-step Euler-Maruyama integration of the noisy IFB model.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "ifb/model.hpp"

namespace ifb {

struct SimulationSettings {
    double dt = 0.02;             // step [ms]
    double duration = 3000.0;     // simulated time [ms]
    double D = 0.0;               // noise intensity, in current units
    std::uint64_t seed = 0;
    bool record_trajectory = false;
    int record_stride = 10;       // steps between stored trajectory samples

    void validate() const;

    // ceil(duration / dt), with a relative tolerance so that e.g. 3000 / 0.02
    // gives 150000 rather than 150001.
    std::int64_t step_count() const;

    bool operator==(const SimulationSettings&) const = default;
};

// Strided samples of (t, v, h). The first sample is the initial condition at
// t = 0; later samples are post-reset states.
struct Trajectory {
    Eigen::ArrayXd times;
    Eigen::ArrayXd v;
    Eigen::ArrayXd h;

    Eigen::Index size() const { return times.size(); }
};

struct TrialInfo {
    std::uint64_t seed = 0;
    double D = 0.0;
    double v0 = 0.0;
    double h0 = 0.0;
    double dt = 0.02;
    double duration = 0.0;
    // Observation window [window_start, window_end) the spikes were kept from.
    double window_start = 0.0;
    double window_end = 0.0;

    double window_length() const { return window_end - window_start; }
};

struct SpikeTrain {
    std::vector<double> spike_times;  // [ms], strictly increasing
    TrialInfo info;

    std::size_t size() const { return spike_times.size(); }
    bool empty() const { return spike_times.empty(); }
};

struct StepResult {
    NeuronState state;
    bool spiked;
};

// One Euler-Maruyama step from time t with standard normal sample z:
//   v' = v + dt * drift_v + (D / C) * sqrt(dt) * z
//   h' = clamp(h + dt * drift_h, 0, 1)
// followed by the threshold/reset rule.
inline StepResult em_step(const NeuronState& s, double t, const SimulationSettings& settings,
                          const ModelParameters& p, double z) {
    NeuronState next{s.v + settings.dt * drift_v(t, s, p), s.h + settings.dt * drift_h(s, p)};
    if (settings.D != 0.0) next.v += (settings.D / p.C) * std::sqrt(settings.dt) * z;
    next.h = std::clamp(next.h, 0.0, 1.0);
    const auto reset = apply_threshold_reset(next, p);
    return {reset.state, reset.spiked};
}

struct SimulationResult {
    SpikeTrain spikes;
    std::optional<Trajectory> trajectory;
};

// Runs step_count() steps from (v0, h0) at t = 0. A spike at step k (state
// advanced from t_k = k*dt) is stamped t_{k+1}. The Gaussian stream is seeded
// from settings.seed and only consumed when D != 0.
//
// Throws std::invalid_argument for h0 outside [0, 1], non-finite inputs or
// invalid settings/parameters.
SimulationResult simulate(double v0, double h0, const SimulationSettings& settings, const ModelParameters& p);

}  // namespace ifb
