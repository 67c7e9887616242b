#include "ifb/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "ifb/parallel.hpp"

namespace ifb {

void EnsembleSpec::validate() const {
    if (!std::isfinite(v0) || !std::isfinite(h0) || h0 < 0.0 || h0 > 1.0)
        throw std::invalid_argument("initial condition must be finite with h0 in [0, 1]");
    if (D_values.empty()) throw std::invalid_argument("at least one noise intensity is required");
    for (double D : D_values) {
        if (!std::isfinite(D) || D < 0) throw std::invalid_argument("noise intensities must be non-negative and finite");
    }
    if (n_trials < 1) throw std::invalid_argument("n_trials must be at least 1");
    if (!(transient_cutoff >= 0)) throw std::invalid_argument("transient cutoff must be non-negative");
    if (!(trial_duration > transient_cutoff)) throw std::invalid_argument("trial duration must exceed the transient cutoff");
    if (!(dt > 0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
}

namespace {

SimulationSettings trial_settings(double dt, double duration, double D, std::uint64_t seed) {
    SimulationSettings settings;
    settings.dt = dt;
    settings.duration = duration;
    settings.D = D;
    settings.seed = seed;
    return settings;
}

AnalysisSettings with_cutoff(AnalysisSettings analysis, double cutoff) {
    analysis.transient_cutoff = cutoff;
    return analysis;
}

}  // namespace

TrialStatistics run_ensemble_trial(const EnsembleSpec& spec, const ModelParameters& p, const AnalysisSettings& analysis,
                                   std::size_t d_index, std::size_t trial) {
    const std::uint64_t seed = ensemble_trial_seed(spec.base_seed, d_index, trial);
    const SimulationSettings settings = trial_settings(spec.dt, spec.trial_duration, spec.D_values.at(d_index), seed);
    try {
        const SimulationResult run = simulate(spec.v0, spec.h0, settings, p);
        return analyze_trial(run.spikes, with_cutoff(analysis, spec.transient_cutoff));
    } catch (const std::exception& e) {
        throw TrialError("trial " + std::to_string(trial) + " at D index " + std::to_string(d_index) + " failed: " + e.what(),
                         d_index, trial, seed);
    }
}

AggregateCurve run_ensemble(const EnsembleSpec& spec, const ModelParameters& p, const AnalysisSettings& analysis,
                            unsigned workers) {
    spec.validate();
    p.validate();
    analysis.validate();

    const std::size_t n_d = spec.D_values.size();
    const auto n_trials = static_cast<std::size_t>(spec.n_trials);
    std::vector<TrialStatistics> trials(n_d * n_trials);
    parallel_for(trials.size(), workers, [&](std::size_t k) {
        trials[k] = run_ensemble_trial(spec, p, analysis, k / n_trials, k % n_trials);
    });

    AggregateCurve curve;
    curve.points.reserve(n_d);
    for (std::size_t d = 0; d < n_d; ++d) {
        CurvePoint point;
        point.D = spec.D_values[d];
        point.n_trials = spec.n_trials;
        double rate_sum = 0.0;
        std::array<double, 4> occurrence_sum{};
        std::vector<IsiHistogram> histograms;
        histograms.reserve(n_trials);
        for (std::size_t t = 0; t < n_trials; ++t) {
            TrialStatistics& stats = trials[d * n_trials + t];
            rate_sum += stats.transition_rate;
            if (!stats.occurrence.empty()) {
                ++point.n_trials_with_bursts;
                for (auto [mode, fraction] : stats.occurrence) occurrence_sum[static_cast<std::size_t>(mode - 1)] += fraction;
            }
            histograms.push_back(std::move(stats.isih));
        }
        point.mean_transition_rate = rate_sum / static_cast<double>(n_trials);
        if (point.n_trials_with_bursts > 0) {
            for (std::size_t m = 0; m < 4; ++m) point.mean_occurrence[m] = occurrence_sum[m] / point.n_trials_with_bursts;
        }
        point.pooled_isih = pool_histograms(histograms);
        point.pooled_isih.binwidth = analysis.binwidth;
        curve.points.push_back(std::move(point));
    }
    return curve;
}

GridSpec GridSpec::coarse() {
    GridSpec spec;
    spec.v0_resolution = 2.0;
    spec.h0_resolution = 0.04;
    return spec;
}

void GridSpec::validate() const {
    for (double x : {v0_lo, v0_hi, h0_lo, h0_hi, v0_resolution, h0_resolution, D, duration, transient_cutoff, dt}) {
        if (!std::isfinite(x)) throw std::invalid_argument("grid settings must be finite");
    }
    if (!(v0_resolution > 0) || !(h0_resolution > 0)) throw std::invalid_argument("grid resolutions must be positive");
    if (v0_hi < v0_lo || h0_hi < h0_lo) throw std::invalid_argument("grid ranges must be ordered");
    if (h0_lo < 0 || h0_hi > 1) throw std::invalid_argument("h0 range must lie within [0, 1]");
    if (D < 0) throw std::invalid_argument("noise intensity must be non-negative");
    if (!(transient_cutoff >= 0)) throw std::invalid_argument("transient cutoff must be non-negative");
    if (!(duration > transient_cutoff)) throw std::invalid_argument("duration must exceed the transient cutoff");
    if (!(dt > 0)) throw std::invalid_argument("dt must be positive");
}

namespace {

Eigen::ArrayXd make_axis(double lo, double hi, double resolution) {
    const auto n = static_cast<Eigen::Index>(std::floor((hi - lo) / resolution + 1e-9)) + 1;
    Eigen::ArrayXd axis(n);
    for (Eigen::Index i = 0; i < n; ++i) axis[i] = lo + static_cast<double>(i) * resolution;
    return axis;
}

}  // namespace

Eigen::ArrayXd GridSpec::v0_axis() const { return make_axis(v0_lo, v0_hi, v0_resolution); }
Eigen::ArrayXd GridSpec::h0_axis() const { return make_axis(h0_lo, h0_hi, h0_resolution); }

double run_grid_cell(const GridSpec& spec, const ModelParameters& p, const AnalysisSettings& analysis, std::size_t i,
                     std::size_t j) {
    const Eigen::ArrayXd v0s = spec.v0_axis();
    const Eigen::ArrayXd h0s = spec.h0_axis();
    const std::uint64_t seed = grid_cell_seed(spec.base_seed, i, j);
    const SimulationSettings settings = trial_settings(spec.dt, spec.duration, spec.D, seed);
    try {
        // Axis values can overshoot 1 by rounding at the top of the h0 range.
        const double h0 = std::min(h0s[static_cast<Eigen::Index>(j)], 1.0);
        const SimulationResult run = simulate(v0s[static_cast<Eigen::Index>(i)], h0, settings, p);
        const TrialStatistics stats = analyze_trial(run.spikes, with_cutoff(analysis, spec.transient_cutoff));
        return stats.mean_spikes_per_burst.value_or(std::numeric_limits<double>::quiet_NaN());
    } catch (const std::exception& e) {
        throw TrialError("grid cell (" + std::to_string(i) + ", " + std::to_string(j) + ") failed: " + e.what(), i, j, seed);
    }
}

GridMap run_grid(const GridSpec& spec, const ModelParameters& p, const AnalysisSettings& analysis, unsigned workers) {
    spec.validate();
    p.validate();
    analysis.validate();

    GridMap map{spec.v0_axis(), spec.h0_axis(), {}};
    const auto rows = static_cast<std::size_t>(map.v0_values.size());
    const auto cols = static_cast<std::size_t>(map.h0_values.size());
    map.mean_spikes.resize(map.v0_values.size(), map.h0_values.size());
    parallel_for(rows * cols, workers, [&](std::size_t k) {
        const std::size_t i = k / cols, j = k % cols;
        map.mean_spikes(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = run_grid_cell(spec, p, analysis, i, j);
    });
    return map;
}

}  // namespace ifb
