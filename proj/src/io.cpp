#include "ifb/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <system_error>

namespace ifb {

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, result.ptr);
}

void write_header(std::ostream& out, Command command, const RunConfig& config) {
    out << "# ifbsim " << toolkit_version << " " << to_string(command) << "\n";
    out << "# units: time ms, potential mV, h dimensionless, noise D in current units (uA), rates per second\n";
    out << "# seed: " << config.seed << "\n";
    out << "# config: " << to_json(config).dump() << "\n";
}

void write_spike_csv(std::ostream& out, const SpikeTrain& spikes) {
    out << "spike_time_ms\n";
    for (double t : spikes.spike_times) out << format_double(t) << "\n";
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    out << "t_ms,v_mV,h\n";
    for (Eigen::Index i = 0; i < traj.size(); ++i) {
        out << format_double(traj.times[i]) << "," << format_double(traj.v[i]) << "," << format_double(traj.h[i]) << "\n";
    }
}

void write_noise_sweep_csv(std::ostream& out, const AggregateCurve& curve) {
    out << "D,transition_rate_mean,occ_mode1,occ_mode2,occ_mode3,occ_mode4,n_trials\n";
    for (const CurvePoint& point : curve.points) {
        out << format_double(point.D) << "," << format_double(point.mean_transition_rate);
        for (double occ : point.mean_occurrence) out << "," << format_double(occ);
        out << "," << point.n_trials << "\n";
    }
}

void write_isih_csv(std::ostream& out, const IsiHistogram& hist) {
    out << "isi_bin_ms,fraction\n";
    for (std::size_t k = 0; k < hist.bin_fractions.size(); ++k) {
        out << format_double(hist.bin_left_edge(k)) << "," << format_double(hist.bin_fractions[k]) << "\n";
    }
}

void write_grid_csv(std::ostream& out, const GridMap& map) {
    out << "v0,h0,mean_spikes_per_burst\n";
    for (Eigen::Index i = 0; i < map.v0_values.size(); ++i) {
        for (Eigen::Index j = 0; j < map.h0_values.size(); ++j) {
            out << format_double(map.v0_values[i]) << "," << format_double(map.h0_values[j]) << ","
                << format_double(map.mean_spikes(i, j)) << "\n";
        }
    }
}

std::vector<double> read_spike_csv(std::istream& in) {
    std::vector<double> times;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#' || line == "spike_time_ms") continue;
        double value = 0.0;
        const auto result = std::from_chars(line.data(), line.data() + line.size(), value);
        if (result.ec != std::errc{} || result.ptr != line.data() + line.size()) {
            throw std::invalid_argument("malformed spike time '" + line + "'");
        }
        if (!times.empty() && !(value > times.back())) throw std::invalid_argument("spike times must be strictly increasing");
        times.push_back(value);
    }
    return times;
}

nlohmann::json make_manifest(Command command, const RunConfig& config) {
    nlohmann::json manifest = to_json(config);
    manifest["toolkit_version"] = toolkit_version;
    manifest["command"] = to_string(command);
    return manifest;
}

void ensure_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw OutputError("cannot create output directory '" + dir.string() + "'" + (ec ? ": " + ec.message() : ""));
    }
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw OutputError("cannot open '" + path.string() + "' for writing");
    return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw OutputError("failed writing '" + path.string() + "'");
}

}  // namespace ifb
