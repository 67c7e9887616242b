#pragma once

// Plot-ready tabular outputs: comma-separated values preceded by '#' comment
// lines that carry the toolkit version, units, seed and full configuration.

#include <filesystem>
#include <fstream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ifb/bursts.hpp"
#include "ifb/config.hpp"
#include "ifb/experiments.hpp"
#include "ifb/integrator.hpp"

namespace ifb {

class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

void write_header(std::ostream& out, Command command, const RunConfig& config);

void write_spike_csv(std::ostream& out, const SpikeTrain& spikes);
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
// Columns D, transition_rate_mean, occ_mode1..occ_mode4, n_trials.
void write_noise_sweep_csv(std::ostream& out, const AggregateCurve& curve);
// Columns isi_bin_ms, fraction; one row per bin up to the last occupied one.
void write_isih_csv(std::ostream& out, const IsiHistogram& hist);
// Long form v0, h0, mean_spikes_per_burst; no-burst cells hold "nan".
void write_grid_csv(std::ostream& out, const GridMap& map);

// Reads a spike column written by write_spike_csv ('#' lines and the
// column header are skipped).
std::vector<double> read_spike_csv(std::istream& in);

// Effective configuration plus toolkit version and command.
nlohmann::json make_manifest(Command command, const RunConfig& config);

void ensure_directory(const std::filesystem::path& dir);
std::ofstream open_output(const std::filesystem::path& path);
void finish_output(std::ofstream& out, const std::filesystem::path& path);

// Opens `path` for writing, runs write_header then `body`; throws OutputError
// when the file cannot be written.
template <typename Body>
void write_table(const std::filesystem::path& path, Command command, const RunConfig& config, Body&& body) {
    std::ofstream out = open_output(path);
    write_header(out, command, config);
    body(out);
    finish_output(out, path);
}

}  // namespace ifb
