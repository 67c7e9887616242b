#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "ifb/experiments.hpp"
#include "ifb/parallel.hpp"

using ifb::EnsembleSpec;
using ifb::GridMap;
using ifb::GridSpec;
using ifb::ModelParameters;

namespace {

EnsembleSpec small_ensemble() {
    EnsembleSpec spec;
    spec.D_values = {0.0, 0.5, 2.0};
    spec.n_trials = 4;
    spec.trial_duration = 2000.0;
    spec.base_seed = 424242;
    return spec;
}

GridSpec small_grid(double D = 0.0) {
    GridSpec spec;
    spec.v0_lo = -60.0;
    spec.v0_hi = -40.0;
    spec.h0_lo = 0.0;
    spec.h0_hi = 0.2;
    spec.v0_resolution = 4.0;
    spec.h0_resolution = 0.04;
    spec.D = D;
    spec.duration = 3000.0;
    spec.base_seed = 99;
    return spec;
}

void expect_same_curve(const ifb::AggregateCurve& a, const ifb::AggregateCurve& b) {
    ASSERT_EQ(a.points.size(), b.points.size());
    for (std::size_t d = 0; d < a.points.size(); ++d) {
        EXPECT_EQ(a.points[d].D, b.points[d].D);
        EXPECT_EQ(a.points[d].mean_transition_rate, b.points[d].mean_transition_rate);
        EXPECT_EQ(a.points[d].mean_occurrence, b.points[d].mean_occurrence);
        EXPECT_EQ(a.points[d].pooled_isih.bin_counts, b.points[d].pooled_isih.bin_counts);
        EXPECT_EQ(a.points[d].n_trials_with_bursts, b.points[d].n_trials_with_bursts);
    }
}

bool same_map(const GridMap& a, const GridMap& b) {
    if (a.mean_spikes.rows() != b.mean_spikes.rows() || a.mean_spikes.cols() != b.mean_spikes.cols()) return false;
    for (Eigen::Index k = 0; k < a.mean_spikes.size(); ++k) {
        const double x = a.mean_spikes.data()[k], y = b.mean_spikes.data()[k];
        if (!(x == y || (GridMap::is_no_burst(x) && GridMap::is_no_burst(y)))) return false;
    }
    return true;
}

}  // namespace

TEST(ParallelFor, VisitsEveryIndexOnce) {
    std::vector<int> hits(1000, 0);
    ifb::parallel_for(hits.size(), 4, [&](std::size_t i) { ++hits[i]; });
    for (int h : hits) EXPECT_EQ(h, 1);
    ifb::parallel_for(0, 4, [&](std::size_t) { FAIL(); });
}

TEST(ParallelFor, RethrowsLowestFailingIndex) {
    try {
        ifb::parallel_for(50, 1, [](std::size_t i) {
            if (i == 7 || i == 30) throw std::runtime_error(std::to_string(i));
        });
        FAIL();
    } catch (const std::runtime_error& e) {
        EXPECT_STREQ(e.what(), "7");
    }
}

TEST(Ensemble, SerialAndParallelAreBitwiseEqual) {
    const ModelParameters p;
    const auto spec = small_ensemble();
    expect_same_curve(ifb::run_ensemble(spec, p, {}, 1), ifb::run_ensemble(spec, p, {}, 3));
}

TEST(Ensemble, SingleTrialRecomputesFromSeed) {
    const ModelParameters p;
    const auto spec = small_ensemble();
    const auto direct = ifb::run_ensemble_trial(spec, p, {}, 1, 0);
    EXPECT_EQ(ifb::run_ensemble_trial(spec, p, {}, 1, 0).isih.bin_counts, direct.isih.bin_counts);

    // A one-trial ensemble sharing the D index reproduces that trial.
    EnsembleSpec one = spec;
    one.n_trials = 1;
    const auto curve = ifb::run_ensemble(one, p, {}, 1);
    EXPECT_EQ(curve.points[1].pooled_isih.bin_counts, direct.isih.bin_counts);
    EXPECT_EQ(curve.points[1].mean_transition_rate, direct.transition_rate);
}

TEST(Ensemble, DeterministicPointIsDegenerate) {
    const ModelParameters p;
    EnsembleSpec spec;
    spec.D_values = {0.0};
    spec.n_trials = 1;
    spec.trial_duration = 3000.0;
    const auto curve = ifb::run_ensemble(spec, p, {}, 1);
    ASSERT_EQ(curve.points.size(), 1u);
    const auto& point = curve.points[0];
    EXPECT_EQ(point.mean_transition_rate, 0.0);
    EXPECT_EQ(point.mean_occurrence[1], 1.0);
    EXPECT_EQ(point.n_trials, 1);
    EXPECT_EQ(point.n_trials_with_bursts, 1);
}

TEST(Ensemble, OccurrenceSumsToOne) {
    const ModelParameters p;
    const auto curve = ifb::run_ensemble(small_ensemble(), p, {}, 1);
    for (const auto& point : curve.points) {
        ASSERT_GT(point.n_trials_with_bursts, 0);
        EXPECT_NEAR(std::accumulate(point.mean_occurrence.begin(), point.mean_occurrence.end(), 0.0), 1.0, 1e-12);
        EXPECT_NEAR(std::accumulate(point.pooled_isih.bin_fractions.begin(), point.pooled_isih.bin_fractions.end(), 0.0),
                    1.0, 1e-12);
        EXPECT_GE(point.mean_transition_rate, 0.0);
    }
    EXPECT_EQ(curve.points[0].mean_transition_rate, 0.0);
}

TEST(Ensemble, RejectsInvalidSpecs) {
    const ModelParameters p;
    auto bad = [](auto mutate) {
        EnsembleSpec spec = small_ensemble();
        mutate(spec);
        return spec;
    };
    EXPECT_THROW(ifb::run_ensemble(bad([](auto& s) { s.D_values = {0.1, -0.2}; }), p), std::invalid_argument);
    EXPECT_THROW(ifb::run_ensemble(bad([](auto& s) { s.D_values.clear(); }), p), std::invalid_argument);
    EXPECT_THROW(ifb::run_ensemble(bad([](auto& s) { s.n_trials = 0; }), p), std::invalid_argument);
    EXPECT_THROW(ifb::run_ensemble(bad([](auto& s) { s.h0 = 1.2; }), p), std::invalid_argument);
    EXPECT_THROW(ifb::run_ensemble(bad([](auto& s) { s.trial_duration = 50.0; }), p), std::invalid_argument);
}

TEST(Ensemble, FailingTrialReportsIdentity) {
    const ModelParameters p;
    EnsembleSpec spec = small_ensemble();
    // Noise increments this large overflow, and a downward one is not caught by the reset.
    spec.D_values = {1e308};
    spec.dt = 1e4;
    spec.trial_duration = 1e6;
    try {
        ifb::run_ensemble(spec, p, {}, 2);
        FAIL() << "expected TrialError";
    } catch (const ifb::TrialError& e) {
        EXPECT_EQ(e.outer_index, 0u);
        EXPECT_EQ(e.inner_index, 0u);
        EXPECT_EQ(e.seed, ifb::ensemble_trial_seed(spec.base_seed, 0, 0));
    }
}

TEST(EnsembleSeeds, DistinctAcrossTrialsAndNoiseLevels) {
    std::set<std::uint64_t> seeds;
    for (std::size_t d = 0; d < 20; ++d) {
        for (std::size_t t = 0; t < 300; ++t) seeds.insert(ifb::ensemble_trial_seed(5, d, t));
    }
    EXPECT_EQ(seeds.size(), 20u * 300u);
}

TEST(GridSpec, AxesAndPresets) {
    const GridSpec fine;
    EXPECT_EQ(fine.v0_axis().size(), 111);
    EXPECT_EQ(fine.h0_axis().size(), 101);
    EXPECT_EQ(fine.v0_axis()[110], -35.0);
    EXPECT_NEAR(fine.h0_axis()[100], 1.0, 1e-12);
    const GridSpec coarse = GridSpec::coarse();
    EXPECT_EQ(coarse.v0_axis().size(), 28);
    EXPECT_EQ(coarse.h0_axis().size(), 26);

    GridSpec bad;
    bad.h0_hi = 1.5;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad = GridSpec{};
    bad.v0_resolution = 0.0;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad = GridSpec{};
    bad.D = -1.0;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(Grid, DeterministicSubWindowShowsBothModes) {
    const ModelParameters p;
    const GridMap map = ifb::run_grid(small_grid(), p, {}, 1);
    ASSERT_EQ(map.mean_spikes.rows(), 6);
    ASSERT_EQ(map.mean_spikes.cols(), 6);
    std::set<double> values;
    for (Eigen::Index k = 0; k < map.mean_spikes.size(); ++k) {
        const double v = map.mean_spikes.data()[k];
        if (!GridMap::is_no_burst(v)) values.insert(v);
    }
    EXPECT_TRUE(values.count(2.0));
    EXPECT_TRUE(values.count(3.0));
    for (double v : values) EXPECT_TRUE(v == 2.0 || v == 3.0) << v;
}

TEST(Grid, SerialParallelAndCellRecomputationAgree) {
    const ModelParameters p;
    const GridSpec spec = small_grid(1.0);
    const GridMap serial = ifb::run_grid(spec, p, {}, 1);
    const GridMap parallel = ifb::run_grid(spec, p, {}, 4);
    EXPECT_TRUE(same_map(serial, parallel));
    for (std::size_t i : {0u, 3u, 5u}) {
        for (std::size_t j : {0u, 2u, 5u}) {
            const double cell = ifb::run_grid_cell(spec, p, {}, i, j);
            const double stored = serial.mean_spikes(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            EXPECT_TRUE(cell == stored || (GridMap::is_no_burst(cell) && GridMap::is_no_burst(stored)));
        }
    }
}

TEST(Grid, ValuesStayWithinModeRange) {
    const ModelParameters p;
    const GridMap map = ifb::run_grid(small_grid(3.0), p, {}, 2);
    for (Eigen::Index k = 0; k < map.mean_spikes.size(); ++k) {
        const double v = map.mean_spikes.data()[k];
        if (GridMap::is_no_burst(v)) continue;
        EXPECT_GE(v, 1.0);
    }
}
