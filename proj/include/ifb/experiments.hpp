#pragma once

// Seeded trial ensembles, noise sweeps and initial-condition grid sweeps.
//
// Every trial draws from its own Gaussian stream seeded by derive_trial_seed,
// and results are merged in index order, so outputs do not depend on the
// number of workers or on scheduling.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ifb/bursts.hpp"
#include "ifb/integrator.hpp"
#include "ifb/model.hpp"
#include "ifb/random.hpp"

namespace ifb {

// A trial that failed inside an ensemble or grid, with its identity.
class TrialError : public std::runtime_error {
public:
    TrialError(const std::string& what, std::size_t outer_index, std::size_t inner_index, std::uint64_t seed)
        : std::runtime_error(what), outer_index(outer_index), inner_index(inner_index), seed(seed) {}

    std::size_t outer_index;  // D index (ensemble) or v0 index (grid)
    std::size_t inner_index;  // trial index (ensemble) or h0 index (grid)
    std::uint64_t seed;
};

struct EnsembleSpec {
    double v0 = -45.0;
    double h0 = 0.045;
    std::vector<double> D_values{0.0};
    int n_trials = 300;
    double trial_duration = 30000.0;  // [ms]
    std::uint64_t base_seed = 0;
    double transient_cutoff = 100.0;  // [ms]
    double dt = 0.02;

    void validate() const;
};

struct CurvePoint {
    double D = 0.0;
    double mean_transition_rate = 0.0;        // over all trials [1/s]
    std::array<double, 4> mean_occurrence{};  // modes 1..4, over trials with bursts
    IsiHistogram pooled_isih;                 // ISIs of all trials
    int n_trials = 0;
    int n_trials_with_bursts = 0;
};

struct AggregateCurve {
    std::vector<CurvePoint> points;
};

// Seed of trial `trial` at D index `d_index`.
inline std::uint64_t ensemble_trial_seed(std::uint64_t base_seed, std::size_t d_index, std::size_t trial) {
    return derive_trial_seed(base_seed, {d_index, trial});
}

// Throws TrialError (fail-fast) when any trial fails.
AggregateCurve run_ensemble(const EnsembleSpec& spec, const ModelParameters& p, const AnalysisSettings& analysis = {},
                            unsigned workers = 0);

// Statistics of a single ensemble trial, recomputed from its derived seed.
TrialStatistics run_ensemble_trial(const EnsembleSpec& spec, const ModelParameters& p, const AnalysisSettings& analysis,
                                   std::size_t d_index, std::size_t trial);

struct GridSpec {
    double v0_lo = -90.0, v0_hi = -35.0;
    double h0_lo = 0.0, h0_hi = 1.0;
    double v0_resolution = 0.5;
    double h0_resolution = 0.01;
    double D = 0.0;
    double duration = 40000.0;  // [ms]
    std::uint64_t base_seed = 0;
    double transient_cutoff = 100.0;
    double dt = 0.02;

    static GridSpec coarse();

    void validate() const;

    // lo, lo + res, ... up to hi inclusive (within rounding).
    Eigen::ArrayXd v0_axis() const;
    Eigen::ArrayXd h0_axis() const;
};

// Mean spikes per complete burst; rows follow v0, columns follow h0. NaN
// marks a cell without complete bursts.
struct GridMap {
    Eigen::ArrayXd v0_values;
    Eigen::ArrayXd h0_values;
    Eigen::MatrixXd mean_spikes;

    static bool is_no_burst(double value) { return value != value; }
};

inline std::uint64_t grid_cell_seed(std::uint64_t base_seed, std::size_t i, std::size_t j) {
    return derive_trial_seed(base_seed, {i, j});
}

GridMap run_grid(const GridSpec& spec, const ModelParameters& p, const AnalysisSettings& analysis = {},
                 unsigned workers = 0);

// Mean spikes per complete burst for cell (i, j), recomputed from its seed.
double run_grid_cell(const GridSpec& spec, const ModelParameters& p, const AnalysisSettings& analysis, std::size_t i,
                     std::size_t j);

}  // namespace ifb
