#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "ifb/bursts.hpp"
#include "ifb/config.hpp"
#include "ifb/experiments.hpp"
#include "ifb/integrator.hpp"
#include "ifb/io.hpp"

namespace ifb::cli {

namespace fs = std::filesystem;

namespace {

// Command-line values; each one overrides the config file when given.
struct Overrides {
    std::string config_path;
    std::uint64_t seed = 0;
    double v0 = 0, h0 = 0, duration = 0, dt = 0, isi_threshold = 0, binwidth = 0, transient = 0;
    std::vector<double> noise;
    int trials = 0;
    unsigned workers = 0;
    std::string out_dir;
    std::string h_equation;
    bool trajectory = false;
    int stride = 0;
    std::string preset;
    std::string spikes_path;

    std::map<std::string, CLI::Option*> options;

    bool given(const std::string& name) const {
        auto it = options.find(name);
        return it != options.end() && it->second->count() > 0;
    }
};

void add_common_options(CLI::App& sub, Overrides& o) {
    o.options["config"] = sub.add_option("--config", o.config_path, "JSON run configuration");
    o.options["seed"] = sub.add_option("--seed", o.seed, "base random seed (u64)");
    o.options["v0"] = sub.add_option("--v0", o.v0, "initial membrane potential [mV]");
    o.options["h0"] = sub.add_option("--h0", o.h0, "initial gate value in [0, 1]");
    o.options["noise"] = sub.add_option("--noise", o.noise, "noise intensity D (comma-separated list for sweeps)")
                             ->delimiter(',');
    o.options["duration"] = sub.add_option("--duration-ms", o.duration, "simulated time per trial [ms]");
    o.options["dt"] = sub.add_option("--dt-ms", o.dt, "integration step [ms] (default 0.02)");
    o.options["isi"] = sub.add_option("--isi-threshold-ms", o.isi_threshold, "burst ISI threshold [ms] (default 80)");
    o.options["binwidth"] = sub.add_option("--binwidth-ms", o.binwidth, "ISI histogram bin width [ms] (default 1)");
    o.options["transient"] = sub.add_option("--transient-ms", o.transient, "transient cutoff [ms] (default 100)");
    o.options["trials"] = sub.add_option("--trials", o.trials, "trials per noise value");
    o.options["workers"] = sub.add_option("--workers", o.workers, "worker threads (0 = all cores)");
    o.options["out"] = sub.add_option("--out", o.out_dir, "output directory");
    o.options["h-equation"] = sub.add_option("--h-equation", o.h_equation, "gate equation: corrected | as-printed");
}

RunConfig build_config(const Overrides& o, Command command) {
    RunConfig c = o.config_path.empty() ? RunConfig{} : load_config(o.config_path);
    if (o.given("seed")) c.seed = o.seed;
    if (o.given("v0")) c.v0 = o.v0;
    if (o.given("h0")) c.h0 = o.h0;
    if (o.given("noise")) {
        const bool single = command == Command::simulate || command == Command::sweep_grid;
        if (single && o.noise.size() != 1) throw ConfigError("--noise takes a single value for " + to_string(command));
        c.noise_values = o.noise;
        c.noise = o.noise.front();
    }
    if (o.given("duration")) c.duration = o.duration;
    if (o.given("dt")) c.dt = o.dt;
    if (o.given("isi")) c.analysis.isi_threshold = o.isi_threshold;
    if (o.given("binwidth")) c.analysis.binwidth = o.binwidth;
    if (o.given("transient")) c.analysis.transient_cutoff = o.transient;
    if (o.given("trials")) c.trials = o.trials;
    if (o.given("workers")) c.workers = o.workers;
    if (o.given("out")) c.out_dir = o.out_dir;
    if (o.given("h-equation")) {
        try {
            c.model.h_equation = parse_h_equation(o.h_equation);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    if (o.given("trajectory") && o.trajectory) c.record_trajectory = true;
    if (o.given("stride")) c.record_stride = o.stride;
    if (o.given("preset")) {
        const GridSpec preset = o.preset == "coarse" ? GridSpec::coarse() : GridSpec{};
        if (o.preset != "coarse" && o.preset != "fine") throw ConfigError("--preset must be 'coarse' or 'fine'");
        c.v0_resolution = preset.v0_resolution;
        c.h0_resolution = preset.h0_resolution;
    }
    c.duration = c.duration_for(command);
    c.validate();
    return c;
}

void write_manifest(const RunConfig& c, Command command) {
    if (!c.json_manifest && command != Command::sweep_grid) return;
    const fs::path path = fs::path(c.out_dir) / "manifest.json";
    std::ofstream out = open_output(path);
    out << make_manifest(command, c).dump(2) << "\n";
    finish_output(out, path);
}

std::string describe_occurrence(const std::map<int, double>& occurrence) {
    std::ostringstream text;
    bool first = true;
    for (auto [mode, fraction] : occurrence) {
        text << (first ? "" : " ") << "mode" << mode << "=" << format_double(fraction);
        first = false;
    }
    return first ? "(no complete bursts)" : text.str();
}

int cmd_simulate(const RunConfig& c, std::ostream& out) {
    ensure_directory(c.out_dir);
    const SimulationResult run = simulate(c.v0, c.h0, c.simulation_settings(Command::simulate), c.model);

    write_table(fs::path(c.out_dir) / "spikes.csv", Command::simulate, c,
                [&](std::ostream& file) { write_spike_csv(file, run.spikes); });
    if (run.trajectory) {
        write_table(fs::path(c.out_dir) / "trajectory.csv", Command::simulate, c,
                    [&](std::ostream& file) { write_trajectory_csv(file, *run.trajectory); });
    }
    write_manifest(c, Command::simulate);

    const SpikeTrain kept = remove_transient(run.spikes, c.analysis.transient_cutoff);
    const BurstSequence seq = segment_bursts(kept, c.analysis.isi_threshold);
    const std::vector<int> modes = mode_sequence(seq);
    out << "spikes: " << run.spikes.size() << "\n";
    out << "complete bursts after " << format_double(c.analysis.transient_cutoff) << " ms: " << modes.size() << "\n";
    out << "modes:";
    for (int m : modes) out << " " << m;
    out << "\n";
    out << "transition rate: " << format_double(transition_rate(seq)) << " /s\n";
    out << "occurrence: " << describe_occurrence(occurrence_percentages(seq)) << "\n";
    out << "noise regime: " << to_string(classify_noise_regime(c.noise)) << "\n";
    return exit_ok;
}

std::string isih_filename(const std::string& prefix, double D) { return prefix + "_D" + format_double(D) + ".csv"; }

int cmd_sweep_noise(const RunConfig& c, std::ostream& out) {
    ensure_directory(c.out_dir);
    const AggregateCurve curve = run_ensemble(c.ensemble_spec(Command::sweep_noise), c.model, c.analysis, c.workers);
    write_table(fs::path(c.out_dir) / "noise_sweep.csv", Command::sweep_noise, c,
                [&](std::ostream& file) { write_noise_sweep_csv(file, curve); });
    for (const CurvePoint& point : curve.points) {
        write_table(fs::path(c.out_dir) / isih_filename("isih", point.D), Command::sweep_noise, c,
                    [&](std::ostream& file) { write_isih_csv(file, point.pooled_isih); });
    }
    write_manifest(c, Command::sweep_noise);
    write_noise_sweep_csv(out, curve);
    return exit_ok;
}

int cmd_sweep_grid(const RunConfig& c, std::ostream& out) {
    ensure_directory(c.out_dir);
    const GridMap map = run_grid(c.grid_spec(), c.model, c.analysis, c.workers);
    write_table(fs::path(c.out_dir) / "grid.csv", Command::sweep_grid, c,
                [&](std::ostream& file) { write_grid_csv(file, map); });
    write_manifest(c, Command::sweep_grid);

    std::map<std::string, int> tally;
    for (Eigen::Index i = 0; i < map.mean_spikes.size(); ++i) {
        const double value = map.mean_spikes.data()[i];
        ++tally[GridMap::is_no_burst(value) ? std::string("no-burst") : format_double(value)];
    }
    out << "cells: " << map.mean_spikes.size() << " (" << map.v0_values.size() << " x " << map.h0_values.size() << ")\n";
    for (const auto& [value, count] : tally) out << "  mean spikes/burst " << value << ": " << count << "\n";
    return exit_ok;
}

void report_trough(std::ostream& out, double D, const IsiHistogram& hist, const AnalysisSettings& analysis) {
    out << "D=" << format_double(D) << " ISIs=" << hist.total_isi_count;
    try {
        const IsihTrough trough = find_isih_trough(hist, analysis.trough_window);
        out << " trough_isi_ms=" << format_double(trough.isi) << " trough_fraction=" << format_double(trough.fraction)
            << (trough.fraction > 0 ? " (connected peaks)" : " (isolated peaks)") << "\n";
    } catch (const std::domain_error& e) {
        out << " trough: " << e.what() << "\n";
    }
}

int cmd_isih(const RunConfig& c, const std::string& spikes_path, std::ostream& out) {
    ensure_directory(c.out_dir);
    if (!spikes_path.empty()) {
        std::ifstream in(spikes_path);
        if (!in) throw ConfigError("cannot open spike file '" + spikes_path + "'");
        std::vector<double> times;
        try {
            times = read_spike_csv(in);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(spikes_path + ": " + e.what());
        }
        SpikeTrain train;
        train.spike_times = std::move(times);
        const IsiHistogram hist = isi_histogram(remove_transient(train, c.analysis.transient_cutoff), c.analysis.binwidth);
        write_table(fs::path(c.out_dir) / "isih.csv", Command::isih, c,
                    [&](std::ostream& file) { write_isih_csv(file, hist); });
        report_trough(out, c.noise, hist, c.analysis);
        return exit_ok;
    }

    const AggregateCurve curve = run_ensemble(c.ensemble_spec(Command::isih), c.model, c.analysis, c.workers);
    for (const CurvePoint& point : curve.points) {
        write_table(fs::path(c.out_dir) / isih_filename("isih", point.D), Command::isih, c,
                    [&](std::ostream& file) { write_isih_csv(file, point.pooled_isih); });
        report_trough(out, point.D, point.pooled_isih, c.analysis);
    }
    write_manifest(c, Command::isih);
    return exit_ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Stochastic integrate-and-fire-or-burst simulator and burst analytics", "ifbsim"};
    app.set_version_flag("--version", std::string(toolkit_version));
    app.require_subcommand(1);

    Overrides simulate_opts, noise_opts, grid_opts, isih_opts;
    CLI::App* simulate_cmd = app.add_subcommand("simulate", "single trial: spike times, optional (t, v, h) trajectory");
    CLI::App* noise_cmd = app.add_subcommand("sweep-noise", "trial ensembles over noise intensities");
    CLI::App* grid_cmd = app.add_subcommand("sweep-grid", "mean spikes per burst over a (v0, h0) grid");
    CLI::App* isih_cmd = app.add_subcommand("isih", "pooled ISI histograms and trough detection");

    add_common_options(*simulate_cmd, simulate_opts);
    simulate_opts.options["trajectory"] = simulate_cmd->add_flag("--trajectory", simulate_opts.trajectory, "also write trajectory.csv");
    simulate_opts.options["stride"] = simulate_cmd->add_option("--stride", simulate_opts.stride, "steps between trajectory samples");
    add_common_options(*noise_cmd, noise_opts);
    add_common_options(*grid_cmd, grid_opts);
    grid_opts.options["preset"] = grid_cmd->add_option("--preset", grid_opts.preset, "grid resolution: fine (0.5 mV x 0.01) | coarse (2 mV x 0.04)");
    add_common_options(*isih_cmd, isih_opts);
    isih_opts.options["spikes"] = isih_cmd->add_option("--spikes", isih_opts.spikes_path, "histogram an existing spikes.csv instead of simulating");

    std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        std::ostringstream help, error;
        const int code = app.exit(e, help, error);
        out << help.str();
        err << error.str();
        return code == 0 ? exit_ok : exit_config_error;
    }

    try {
        if (simulate_cmd->parsed()) return cmd_simulate(build_config(simulate_opts, Command::simulate), out);
        if (noise_cmd->parsed()) return cmd_sweep_noise(build_config(noise_opts, Command::sweep_noise), out);
        if (grid_cmd->parsed()) return cmd_sweep_grid(build_config(grid_opts, Command::sweep_grid), out);
        if (isih_cmd->parsed()) return cmd_isih(build_config(isih_opts, Command::isih), isih_opts.spikes_path, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return exit_config_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_runtime_error;
    }
    return exit_config_error;
}

}  // namespace ifb::cli
