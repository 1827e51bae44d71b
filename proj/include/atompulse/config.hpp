#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "atompulse/problem.hpp"
#include "atompulse/sweep.hpp"

namespace atompulse {

// Flat "key = value" configuration text with dotted section names and
// '#' comments. Duplicate keys are rejected. Schema in docs/config.md.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(std::istream& in);
KeyValues parse_key_values_file(const std::string& path);

struct SweepSpec {
    std::string axis;                 // bandwidth | photon-number | phase
    std::vector<double> grid;
    bool optimize = false;            // golden refinement (bandwidth only)
};

struct ExperimentConfig {
    Problem problem;
    std::optional<SweepSpec> sweep;
    std::string output_path = "out.csv";

    std::vector<std::pair<std::string, std::string>> echo() const;
};

ExperimentConfig parse_experiment_config(const KeyValues& kv);

// CSV emission. All values use fixed 12-significant-digit formatting and a
// '#'-comment header echoing the resolved configuration.
std::string format_double(double v);
void write_trajectory_csv(const std::string& path, const Trajectory& traj);
void write_sweep_csv(const std::string& path, const SweepResult& result);

struct CsvTable {
    std::vector<std::string> comments;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};
CsvTable read_csv(const std::string& path);

namespace cli {

// Subcommand bodies; return process exit codes (0 ok, 2 config error,
// 3 numerical failure, 4 capacity).
int run_simulate(const std::string& config_path, bool oracle_check);
int run_scan(const std::string& config_path);
int run_reproduce_figure(const std::string& figure_id, const std::string& outdir);

}  // namespace cli

// Figure reproduction: writes one CSV per curve into outdir, returns the
// list of files written. Throws ConfigError for unknown ids.
std::vector<std::string> reproduce_figure(int id, const std::string& outdir);

}  // namespace atompulse
