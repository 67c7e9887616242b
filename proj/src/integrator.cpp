#include "ifb/integrator.hpp"

#include <cmath>
#include <stdexcept>

#include "ifb/random.hpp"

namespace ifb {

void SimulationSettings::validate() const {
    if (!std::isfinite(dt) || !(dt > 0)) throw std::invalid_argument("dt must be positive and finite");
    if (!std::isfinite(duration) || !(duration > 0)) throw std::invalid_argument("duration must be positive and finite");
    if (!std::isfinite(D) || D < 0) throw std::invalid_argument("noise intensity D must be non-negative and finite");
    if (record_stride < 1) throw std::invalid_argument("record_stride must be at least 1");
}

std::int64_t SimulationSettings::step_count() const {
    const double ratio = duration / dt;
    const double nearest = std::round(ratio);
    if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest)) return static_cast<std::int64_t>(nearest);
    return static_cast<std::int64_t>(std::ceil(ratio));
}

SimulationResult simulate(double v0, double h0, const SimulationSettings& settings, const ModelParameters& p) {
    if (!std::isfinite(v0) || !std::isfinite(h0)) throw std::invalid_argument("initial condition must be finite");
    if (h0 < 0.0 || h0 > 1.0) throw std::invalid_argument("h0 must lie in [0, 1]");
    settings.validate();
    p.validate();

    const std::int64_t n_steps = settings.step_count();
    const double dt = settings.dt;

    SimulationResult result;
    result.spikes.info = {settings.seed, settings.D, v0, h0, dt, settings.duration, 0.0,
                          static_cast<double>(n_steps) * dt};

    Trajectory* traj = nullptr;
    const std::int64_t stride = settings.record_stride;
    if (settings.record_trajectory) {
        const Eigen::Index n_samples = 1 + static_cast<Eigen::Index>(n_steps / stride);
        result.trajectory = Trajectory{Eigen::ArrayXd(n_samples), Eigen::ArrayXd(n_samples), Eigen::ArrayXd(n_samples)};
        traj = &*result.trajectory;
        traj->times[0] = 0.0;
        traj->v[0] = v0;
        traj->h[0] = h0;
    }

    GaussianStream noise(settings.seed);
    const bool noisy = settings.D != 0.0;
    NeuronState state{v0, h0};
    Eigen::Index sample = 1;

    for (std::int64_t k = 0; k < n_steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        const double z = noisy ? noise() : 0.0;
        const StepResult step = em_step(state, t, settings, p, z);
        state = step.state;
        if (step.spiked) result.spikes.spike_times.push_back(static_cast<double>(k + 1) * dt);
        if (traj && (k + 1) % stride == 0) {
            traj->times[sample] = static_cast<double>(k + 1) * dt;
            traj->v[sample] = state.v;
            traj->h[sample] = state.h;
            ++sample;
        }
        if (!std::isfinite(state.v)) throw std::runtime_error("membrane potential diverged");
    }
    return result;
}

}  // namespace ifb
