#include "ifb/bursts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ifb {

int classify_mode(std::size_t spike_count) {
    if (spike_count == 0) throw std::invalid_argument("a burst has at least one spike");
    return static_cast<int>(std::min<std::size_t>(spike_count, 4));
}

std::span<const Burst> BurstSequence::complete_bursts() const {
    std::span<const Burst> all(bursts);
    std::size_t skip_front = first_truncated ? 1 : 0;
    std::size_t skip_back = last_truncated ? 1 : 0;
    if (skip_front + skip_back >= all.size()) return {};
    return all.subspan(skip_front, all.size() - skip_front - skip_back);
}

BurstSequence segment_bursts(std::span<const double> spike_times, double trial_duration, double isi_threshold) {
    if (!(isi_threshold > 0)) throw std::invalid_argument("isi_threshold must be positive");
    BurstSequence seq;
    seq.trial_duration = trial_duration;
    for (std::size_t i = 0; i < spike_times.size(); ++i) {
        if (i == 0 || spike_times[i] - spike_times[i - 1] > isi_threshold) seq.bursts.emplace_back();
        seq.bursts.back().spike_times.push_back(spike_times[i]);
    }
    return seq;
}

BurstSequence segment_bursts(const SpikeTrain& spikes, double isi_threshold) {
    return segment_bursts(spikes.spike_times, spikes.info.window_length(), isi_threshold);
}

std::vector<int> mode_sequence(const BurstSequence& seq) {
    std::vector<int> modes;
    for (const Burst& b : seq.complete_bursts()) modes.push_back(b.mode());
    return modes;
}

double transition_rate(const BurstSequence& seq) {
    if (!(seq.trial_duration > 0)) throw std::invalid_argument("trial_duration must be positive");
    const std::vector<int> modes = mode_sequence(seq);
    if (modes.size() < 2) return 0.0;
    std::size_t switches = 0;
    for (std::size_t i = 1; i < modes.size(); ++i) switches += modes[i] != modes[i - 1];
    return static_cast<double>(switches) / (seq.trial_duration / 1000.0);
}

std::map<int, double> occurrence_percentages(const BurstSequence& seq) {
    std::map<int, double> fractions;
    const auto complete = seq.complete_bursts();
    if (complete.empty()) return fractions;
    std::map<int, std::size_t> counts;
    for (const Burst& b : complete) ++counts[b.mode()];
    for (auto [mode, count] : counts) fractions[mode] = static_cast<double>(count) / static_cast<double>(complete.size());
    return fractions;
}

std::vector<double> inter_spike_intervals(std::span<const double> spike_times) {
    std::vector<double> isis;
    if (spike_times.size() < 2) return isis;
    isis.reserve(spike_times.size() - 1);
    for (std::size_t i = 1; i < spike_times.size(); ++i) isis.push_back(spike_times[i] - spike_times[i - 1]);
    return isis;
}

namespace {

void normalize(IsiHistogram& hist) {
    hist.bin_fractions.assign(hist.bin_counts.size(), 0.0);
    if (hist.total_isi_count == 0) return;
    const double total = static_cast<double>(hist.total_isi_count);
    for (std::size_t k = 0; k < hist.bin_counts.size(); ++k) hist.bin_fractions[k] = static_cast<double>(hist.bin_counts[k]) / total;
}

}  // namespace

IsiHistogram isi_histogram_from_intervals(std::span<const double> intervals, double binwidth) {
    if (!(binwidth > 0)) throw std::invalid_argument("binwidth must be positive");
    IsiHistogram hist;
    hist.binwidth = binwidth;
    for (double isi : intervals) {
        if (!(isi >= 0) || !std::isfinite(isi)) throw std::invalid_argument("intervals must be finite and non-negative");
        // Spike times sit on the dt grid; the slack keeps an interval that is
        // an exact multiple of binwidth out of the bin below.
        const auto bin = static_cast<std::size_t>(std::floor(isi / binwidth + 1e-9));
        if (bin >= hist.bin_counts.size()) hist.bin_counts.resize(bin + 1, 0);
        ++hist.bin_counts[bin];
        ++hist.total_isi_count;
    }
    normalize(hist);
    return hist;
}

IsiHistogram isi_histogram(const SpikeTrain& spikes, double binwidth) {
    const std::vector<double> isis = inter_spike_intervals(spikes.spike_times);
    return isi_histogram_from_intervals(isis, binwidth);
}

IsiHistogram pool_histograms(std::span<const IsiHistogram> parts) {
    IsiHistogram pooled;
    if (parts.empty()) return pooled;
    pooled.binwidth = parts.front().binwidth;
    for (const IsiHistogram& part : parts) {
        if (part.binwidth != pooled.binwidth) throw std::invalid_argument("cannot pool histograms with different binwidths");
        if (part.bin_counts.size() > pooled.bin_counts.size()) pooled.bin_counts.resize(part.bin_counts.size(), 0);
        for (std::size_t k = 0; k < part.bin_counts.size(); ++k) pooled.bin_counts[k] += part.bin_counts[k];
        pooled.total_isi_count += part.total_isi_count;
    }
    normalize(pooled);
    return pooled;
}

IsihTrough find_isih_trough(const IsiHistogram& hist, TroughWindow window) {
    if (hist.empty()) throw std::domain_error("ISI histogram is empty");
    if (!(window.lo >= 0) || !(window.hi > window.lo)) throw std::invalid_argument("trough window must satisfy 0 <= lo < hi");
    const double support_end = hist.bin_left_edge(hist.bin_fractions.size());
    if (window.hi > support_end) throw std::domain_error("trough window extends beyond the histogram support");

    const auto first = static_cast<std::size_t>(std::ceil(window.lo / hist.binwidth - 1e-9));
    IsihTrough best{0.0, std::numeric_limits<double>::infinity()};
    for (std::size_t k = first; k < hist.bin_fractions.size() && hist.bin_left_edge(k) < window.hi; ++k) {
        if (hist.bin_fractions[k] < best.fraction) best = {hist.bin_left_edge(k), hist.bin_fractions[k]};
    }
    if (!std::isfinite(best.fraction)) throw std::domain_error("trough window contains no histogram bin");
    return best;
}

std::vector<CycleExtrema> per_cycle_extrema(const Trajectory& traj, const ModelParameters& p) {
    std::vector<CycleExtrema> cycles;
    bool have_crossing = false;
    double v_min = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 1; i < traj.size(); ++i) {
        v_min = std::min(v_min, traj.v[i]);
        if (traj.v[i - 1] <= p.v_h && traj.v[i] > p.v_h) {
            if (have_crossing) cycles.push_back({traj.times[i], traj.h[i], v_min});
            have_crossing = true;
            v_min = std::numeric_limits<double>::infinity();
        }
    }
    return cycles;
}

std::string_view to_string(NoiseRegime regime) {
    switch (regime) {
        case NoiseRegime::deterministic: return "deterministic";
        case NoiseRegime::weak: return "weak";
        case NoiseRegime::intermediate: return "intermediate";
        case NoiseRegime::strong: return "strong";
        case NoiseRegime::extra_strong: return "extra-strong";
    }
    return "unknown";
}

NoiseRegime classify_noise_regime(double D) {
    if (!(D >= 0) || !std::isfinite(D)) throw std::invalid_argument("noise intensity must be non-negative and finite");
    if (D == 0.0) return NoiseRegime::deterministic;
    if (D <= 0.14) return NoiseRegime::weak;
    if (D <= 1.2) return NoiseRegime::intermediate;
    if (D <= 5.0) return NoiseRegime::strong;
    return NoiseRegime::extra_strong;
}

SpikeTrain remove_transient(const SpikeTrain& spikes, double cutoff) {
    if (!(cutoff >= 0)) throw std::invalid_argument("transient cutoff must be non-negative");
    SpikeTrain out;
    out.info = spikes.info;
    out.info.window_start = std::max(spikes.info.window_start, cutoff);
    auto first = std::lower_bound(spikes.spike_times.begin(), spikes.spike_times.end(), cutoff);
    out.spike_times.assign(first, spikes.spike_times.end());
    return out;
}

Trajectory remove_transient(const Trajectory& traj, double cutoff) {
    if (!(cutoff >= 0)) throw std::invalid_argument("transient cutoff must be non-negative");
    const double* begin = traj.times.data();
    const double* end = begin + traj.size();
    const auto first = static_cast<Eigen::Index>(std::lower_bound(begin, end, cutoff) - begin);
    const Eigen::Index n = traj.size() - first;
    return {traj.times.tail(n), traj.v.tail(n), traj.h.tail(n)};
}

void AnalysisSettings::validate() const {
    if (!(isi_threshold > 0) || !std::isfinite(isi_threshold)) throw std::invalid_argument("isi_threshold must be positive");
    if (!(binwidth > 0) || !std::isfinite(binwidth)) throw std::invalid_argument("binwidth must be positive");
    if (!(transient_cutoff >= 0) || !std::isfinite(transient_cutoff)) throw std::invalid_argument("transient cutoff must be non-negative");
    if (!(trough_window.lo >= 0) || !(trough_window.hi > trough_window.lo)) throw std::invalid_argument("trough window must satisfy 0 <= lo < hi");
}

TrialStatistics analyze_trial(const SpikeTrain& raw, const AnalysisSettings& settings, const Trajectory* trajectory,
                              const ModelParameters* p) {
    const SpikeTrain kept = remove_transient(raw, settings.transient_cutoff);
    const BurstSequence seq = segment_bursts(kept, settings.isi_threshold);

    TrialStatistics stats;
    stats.transition_rate = seq.trial_duration > 0 ? transition_rate(seq) : 0.0;
    stats.occurrence = occurrence_percentages(seq);
    const auto complete = seq.complete_bursts();
    stats.complete_burst_count = complete.size();
    if (!complete.empty()) {
        std::size_t spikes = 0;
        for (const Burst& b : complete) spikes += b.spike_times.size();
        stats.mean_spikes_per_burst = static_cast<double>(spikes) / static_cast<double>(complete.size());
    }
    stats.isih = isi_histogram(kept, settings.binwidth);
    if (trajectory && p) stats.cycle_extrema = per_cycle_extrema(remove_transient(*trajectory, settings.transient_cutoff), *p);
    return stats;
}

}  // namespace ifb
