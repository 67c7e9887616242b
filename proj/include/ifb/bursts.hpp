#pragma once

// Spike-train analytics: burst segmentation, mode statistics, inter-spike
// interval histograms and per-cycle extrema of the (v, h) trajectory.

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ifb/integrator.hpp"
#include "ifb/model.hpp"

namespace ifb {

// Burst mode: spike count, saturated at 4 ("4 or more").
int classify_mode(std::size_t spike_count);

struct Burst {
    std::vector<double> spike_times;

    int mode() const { return classify_mode(spike_times.size()); }
};

struct BurstSequence {
    std::vector<Burst> bursts;
    double trial_duration = 0.0;  // observation window length [ms]
    // The first/last burst may have been cut by the observation window; a
    // flagged burst is dropped from mode statistics.
    bool first_truncated = true;
    bool last_truncated = true;

    // Bursts with the flagged boundary bursts removed.
    std::span<const Burst> complete_bursts() const;
};

// A new burst starts at each spike further than isi_threshold from its
// predecessor. The window length is taken from the spike train's info.
BurstSequence segment_bursts(const SpikeTrain& spikes, double isi_threshold = 80.0);
BurstSequence segment_bursts(std::span<const double> spike_times, double trial_duration, double isi_threshold = 80.0);

// Mode sequence of the complete bursts.
std::vector<int> mode_sequence(const BurstSequence& seq);

// Adjacent mode changes among complete bursts per second of window.
double transition_rate(const BurstSequence& seq);

// Fraction of complete bursts per mode; only modes that occur are present.
std::map<int, double> occurrence_percentages(const BurstSequence& seq);

struct IsiHistogram {
    double binwidth = 1.0;
    std::vector<std::size_t> bin_counts;  // bin k covers [k*binwidth, (k+1)*binwidth)
    std::vector<double> bin_fractions;
    std::size_t total_isi_count = 0;

    bool empty() const { return total_isi_count == 0; }
    double bin_left_edge(std::size_t k) const { return static_cast<double>(k) * binwidth; }
};

IsiHistogram isi_histogram(const SpikeTrain& spikes, double binwidth = 1.0);
IsiHistogram isi_histogram_from_intervals(std::span<const double> intervals, double binwidth = 1.0);

// Inter-spike intervals of an ordered spike list.
std::vector<double> inter_spike_intervals(std::span<const double> spike_times);

// Count-wise sum of histograms with equal binwidth; fractions recomputed.
IsiHistogram pool_histograms(std::span<const IsiHistogram> parts);

struct IsihTrough {
    double isi = 0.0;       // left edge of the minimal bin [ms]
    double fraction = 0.0;  // > 0 means the two ISI peaks are connected
};

struct TroughWindow {
    double lo = 30.0;
    double hi = 150.0;

    bool operator==(const TroughWindow&) const = default;
};

// Minimal-fraction bin among bins with left edge in [lo, hi); earliest wins
// ties. Throws std::domain_error when the histogram is empty or does not
// cover the window.
IsihTrough find_isih_trough(const IsiHistogram& hist, TroughWindow window = {});

struct CycleExtrema {
    double crossing_time = 0.0;  // first sample with v above v_h [ms]
    double h_max = 0.0;          // h at that sample
    double v_min = 0.0;          // minimum v since the previous crossing [mV]
};

// A cycle runs from one upward crossing of v through v_h to the next; one
// entry per complete cycle, so n crossings give n - 1 entries.
std::vector<CycleExtrema> per_cycle_extrema(const Trajectory& traj, const ModelParameters& p);

enum class NoiseRegime { deterministic, weak, intermediate, strong, extra_strong };

std::string_view to_string(NoiseRegime regime);

// deterministic: D = 0; weak: (0, 0.14]; intermediate: (0.14, 1.2];
// strong: (1.2, 5]; extra-strong: D > 5. Throws on negative D.
NoiseRegime classify_noise_regime(double D);

// Drops events/samples earlier than cutoff and moves the window start.
SpikeTrain remove_transient(const SpikeTrain& spikes, double cutoff = 100.0);
Trajectory remove_transient(const Trajectory& traj, double cutoff = 400.0);

struct AnalysisSettings {
    double isi_threshold = 80.0;
    double binwidth = 1.0;
    double transient_cutoff = 100.0;
    TroughWindow trough_window{};

    void validate() const;

    bool operator==(const AnalysisSettings&) const = default;
};

struct TrialStatistics {
    double transition_rate = 0.0;
    std::map<int, double> occurrence;
    std::optional<double> mean_spikes_per_burst;  // empty without complete bursts
    std::size_t complete_burst_count = 0;
    IsiHistogram isih;
    std::vector<CycleExtrema> cycle_extrema;
};

// Statistics of one raw trial: transient removal, segmentation, mode
// statistics and ISIH. Cycle extrema are filled when a trajectory is given.
TrialStatistics analyze_trial(const SpikeTrain& raw, const AnalysisSettings& settings,
                              const Trajectory* trajectory = nullptr, const ModelParameters* p = nullptr);

}  // namespace ifb
