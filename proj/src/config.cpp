#include "atompulse/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "atompulse/oracles.hpp"

namespace atompulse {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double parsed = 0.0;
    try {
        parsed = std::stod(value, &used);
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, got '" + value + "'");
    }
    if (used != value.size()) {
        throw ConfigError(key + ": trailing characters in '" + value + "'");
    }
    return parsed;
}

int parse_int(const std::string& key, const std::string& value) {
    const double v = parse_double(key, value);
    const int n = static_cast<int>(std::llround(v));
    if (std::abs(v - n) > 1e-9) {
        throw ConfigError(key + ": expected an integer, got '" + value + "'");
    }
    return n;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError(key + ": expected true/false, got '" + value + "'");
}

// Tracks which keys were consumed so typos surface as errors.
class Lookup {
  public:
    explicit Lookup(const KeyValues& kv) : kv_(kv) {}

    std::optional<std::string> get(const std::string& key) {
        const auto it = kv_.find(key);
        if (it == kv_.end()) return std::nullopt;
        used_.insert(key);
        return it->second;
    }

    std::string require(const std::string& key) {
        auto v = get(key);
        if (!v) throw ConfigError(key + " is required");
        return *v;
    }

    std::optional<double> get_double(const std::string& key) {
        auto v = get(key);
        if (!v) return std::nullopt;
        return parse_double(key, *v);
    }

    double get_double_or(const std::string& key, double fallback) {
        return get_double(key).value_or(fallback);
    }

    void finish() const {
        for (const auto& [key, value] : kv_) {
            if (!used_.count(key)) {
                throw ConfigError("unknown configuration key '" + key + "'");
            }
        }
    }

  private:
    const KeyValues& kv_;
    std::set<std::string> used_;
};

PulseEnvelope parse_envelope(Lookup& look, const std::string& mode) {
    auto pick = [&](const std::string& field) -> std::optional<std::string> {
        auto specific = look.get("envelope." + mode + "." + field);
        auto shared = look.get("envelope." + field);
        return specific ? specific : shared;
    };
    auto kind = pick("kind");
    if (!kind) {
        throw ConfigError("envelope." + mode + ".kind (or envelope.kind) is required");
    }
    auto bandwidth = pick("bandwidth");
    if (!bandwidth) {
        throw ConfigError("envelope." + mode +
                          ".bandwidth (or envelope.bandwidth) is required");
    }
    const std::string prefix = "envelope." + mode + ".";
    const double omega = parse_double(prefix + "bandwidth", *bandwidth);
    double phase = 0.0, epsilon = 1e-10;
    if (auto v = pick("phase")) phase = parse_double(prefix + "phase", *v);
    if (auto v = pick("epsilon")) epsilon = parse_double(prefix + "epsilon", *v);
    try {
        return PulseEnvelope(parse_pulse_shape(*kind), omega, phase, epsilon);
    } catch (const ConfigError& err) {
        throw ConfigError(prefix.substr(0, prefix.size() - 1) + ": " + err.what());
    }
}

// Fock amplitudes: whitespace-separated entries "(n_r,n_l):re[:im]".
FockSuperposition parse_coefficients(const std::string& text) {
    FockSuperposition state;
    std::istringstream in(text);
    std::string entry;
    bool first = true;
    while (in >> entry) {
        const auto close = entry.find(')');
        if (entry.empty() || entry[0] != '(' || close == std::string::npos ||
            close + 1 >= entry.size() || entry[close + 1] != ':') {
            throw ConfigError(
                "state.coefficients: expected '(n_r,n_l):re[:im]', got '" +
                entry + "'");
        }
        const std::string occ_text = entry.substr(1, close - 1);
        const auto comma = occ_text.find(',');
        if (comma == std::string::npos) {
            throw ConfigError("state.coefficients: malformed occupation in '" +
                              entry + "'");
        }
        const int n_r = parse_int("state.coefficients", occ_text.substr(0, comma));
        const int n_l = parse_int("state.coefficients", occ_text.substr(comma + 1));
        const std::string amp_text = entry.substr(close + 2);
        const auto colon = amp_text.find(':');
        double re = 0.0, im = 0.0;
        if (colon == std::string::npos) {
            re = parse_double("state.coefficients", amp_text);
        } else {
            re = parse_double("state.coefficients", amp_text.substr(0, colon));
            im = parse_double("state.coefficients", amp_text.substr(colon + 1));
        }
        if (first) {
            state.total_photons = n_r + n_l;
            first = false;
        }
        state.coefficients.push_back({{n_r, n_l}, cplx(re, im)});
    }
    if (first) throw ConfigError("state.coefficients must not be empty");
    state.validate();
    return state;
}

std::vector<double> parse_grid(const std::string& key, const std::string& text) {
    std::vector<double> grid;
    if (text.find(':') != std::string::npos) {
        // lo:hi:count:lin|log
        std::vector<std::string> parts;
        std::string item;
        std::istringstream in(text);
        while (std::getline(in, item, ':')) parts.push_back(trim(item));
        if (parts.size() != 4) {
            throw ConfigError(key + ": expected 'lo:hi:count:lin|log'");
        }
        const double lo = parse_double(key, parts[0]);
        const double hi = parse_double(key, parts[1]);
        const int count = parse_int(key, parts[2]);
        if (count < 1) throw ConfigError(key + ": count must be >= 1");
        if (parts[3] == "log") {
            if (!(lo > 0.0)) throw ConfigError(key + ": log grids need lo > 0");
            for (int i = 0; i < count; ++i) {
                const double f = count == 1 ? 0.0
                                            : static_cast<double>(i) / (count - 1);
                grid.push_back(lo * std::pow(hi / lo, f));
            }
        } else if (parts[3] == "lin") {
            for (int i = 0; i < count; ++i) {
                const double f = count == 1 ? 0.0
                                            : static_cast<double>(i) / (count - 1);
                grid.push_back(lo + (hi - lo) * f);
            }
        } else {
            throw ConfigError(key + ": spacing must be 'lin' or 'log'");
        }
    } else {
        std::string item;
        std::istringstream in(text);
        while (std::getline(in, item, ',')) {
            item = trim(item);
            if (!item.empty()) grid.push_back(parse_double(key, item));
        }
        if (grid.empty()) throw ConfigError(key + ": empty grid");
    }
    return grid;
}

}  // namespace

KeyValues parse_key_values(std::istream& in) {
    KeyValues kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) +
                              ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        }
        if (kv.count(key)) {
            throw ConfigError("duplicate key '" + key + "'");
        }
        kv[key] = value;
    }
    return kv;
}

KeyValues parse_key_values_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_key_values(in);
}

ExperimentConfig parse_experiment_config(const KeyValues& kv) {
    Lookup look(kv);
    ExperimentConfig cfg{
        Problem{EvenFock{1}, PulseEnvelope(PulseShape::Rectangular, 1.0),
                PulseEnvelope(PulseShape::Rectangular, 1.0), SystemParams{}, {}},
        std::nullopt, "out.csv"};

    const std::string kind = look.require("state.kind");
    if (kind == "fock") {
        cfg.problem.state = parse_coefficients(look.require("state.coefficients"));
    } else if (kind == "even-fock") {
        cfg.problem.state = EvenFock{parse_int("state.n", look.require("state.n"))};
    } else if (kind == "coherent") {
        CoherentPair pair;
        pair.nbar_r = look.get_double_or("state.nbar_r", 0.0);
        pair.nbar_l = look.get_double_or("state.nbar_l", 0.0);
        pair.phi = look.get_double_or("state.phi", 0.0);
        pair.validate();
        cfg.problem.state = pair;
    } else {
        throw ConfigError("state.kind must be fock, even-fock or coherent");
    }

    cfg.problem.env_r = parse_envelope(look, "r");
    cfg.problem.env_l = parse_envelope(look, "l");

    cfg.problem.params.gamma_r = look.get_double_or("params.gamma_r", 0.5);
    cfg.problem.params.gamma_l = look.get_double_or("params.gamma_l", 0.5);
    cfg.problem.params.gamma_env = look.get_double_or("params.gamma_env", 0.0);
    cfg.problem.params.validate();

    if (auto v = look.get("integration.method")) {
        if (*v == "rk4") {
            cfg.problem.overrides.method = Method::RK4Fixed;
        } else if (*v == "rk45") {
            cfg.problem.overrides.method = Method::RK45Adaptive;
        } else {
            throw ConfigError("integration.method must be rk4 or rk45");
        }
    }
    cfg.problem.overrides.abs_tol = look.get_double("integration.abs_tol");
    cfg.problem.overrides.rel_tol = look.get_double("integration.rel_tol");
    cfg.problem.overrides.fixed_dt = look.get_double("integration.dt");
    cfg.problem.overrides.max_step = look.get_double("integration.max_step");
    cfg.problem.overrides.tail = look.get_double("integration.tail");
    if (auto v = look.get("integration.sample_stride")) {
        cfg.problem.overrides.sample_stride =
            parse_int("integration.sample_stride", *v);
    }

    if (auto axis = look.get("sweep.axis")) {
        SweepSpec sweep;
        sweep.axis = *axis;
        if (sweep.axis != "bandwidth" && sweep.axis != "photon-number" &&
            sweep.axis != "phase") {
            throw ConfigError(
                "sweep.axis must be bandwidth, photon-number or phase");
        }
        sweep.grid = parse_grid("sweep.grid", look.require("sweep.grid"));
        if (auto v = look.get("sweep.optimize")) {
            sweep.optimize = parse_bool("sweep.optimize", *v);
        }
        cfg.sweep = sweep;
    }

    if (auto v = look.get("output.path")) cfg.output_path = *v;
    look.finish();
    cfg.problem.validate();
    return cfg;
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::echo() const {
    std::vector<std::pair<std::string, std::string>> out;
    out.emplace_back("state", describe(problem.state));
    out.emplace_back("output.path", output_path);
    if (sweep) {
        out.emplace_back("sweep.axis", sweep->axis);
        std::string grid;
        for (double v : sweep->grid) {
            if (!grid.empty()) grid += ",";
            grid += format_double(v);
        }
        out.emplace_back("sweep.grid", grid);
        out.emplace_back("sweep.optimize", sweep->optimize ? "true" : "false");
    }
    return out;
}

std::string format_double(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.12g", v);
    return buffer;
}

namespace {

void write_comments(
    std::ofstream& out,
    const std::vector<std::pair<std::string, std::string>>& meta) {
    for (const auto& [key, value] : meta) {
        out << "# " << key << " = " << value << "\n";
    }
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("output.path: cannot write '" + path + "'");
    return out;
}

}  // namespace

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    std::ofstream out = open_output(path);
    write_comments(out, traj.metadata);
    out << "# p_max = " << format_double(traj.p_max) << "\n";
    out << "# t_at_max = " << format_double(traj.t_at_max) << "\n";
    out << "t_gamma0,p\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        out << format_double(traj.times[i]) << ","
            << format_double(traj.p_values[i]) << "\n";
    }
}

void write_sweep_csv(const std::string& path, const SweepResult& result) {
    std::ofstream out = open_output(path);
    write_comments(out, result.provenance);
    out << "# axis = " << result.axis << "\n";
    out << "# argmax = " << format_double(result.grid[result.argmax]) << "\n";
    out << "param,p_max,t_at_max\n";
    for (std::size_t i = 0; i < result.grid.size(); ++i) {
        out << format_double(result.grid[i]) << ","
            << format_double(result.p_max[i]) << ","
            << format_double(result.t_at_max[i]) << "\n";
    }
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open CSV file '" + path + "'");
    CsvTable table;
    std::string line;
    bool header_done = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            table.comments.push_back(line);
            continue;
        }
        std::vector<std::string> cells;
        std::istringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (!header_done) {
            table.columns = cells;
            header_done = true;
            continue;
        }
        std::vector<double> values;
        values.reserve(cells.size());
        for (const std::string& c : cells) values.push_back(parse_double("csv", c));
        table.rows.push_back(std::move(values));
    }
    return table;
}

namespace cli {

namespace {

int run_guarded(const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const ConfigError& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return 2;
    } catch (const CapacityError& err) {
        std::cerr << "capacity error: " << err.what() << "\n";
        return 4;
    } catch (const NumericalError& err) {
        std::cerr << "numerical error: " << err.what() << "\n";
        return 3;
    }
}

double interpolate(const Trajectory& traj, double t) {
    const auto& ts = traj.times;
    if (t <= ts.front()) return traj.p_values.front();
    if (t >= ts.back()) return traj.p_values.back();
    const auto it = std::lower_bound(ts.begin(), ts.end(), t);
    const std::size_t hi = static_cast<std::size_t>(it - ts.begin());
    const std::size_t lo = hi - 1;
    const double f = (t - ts[lo]) / (ts[hi] - ts[lo]);
    return traj.p_values[lo] + f * (traj.p_values[hi] - traj.p_values[lo]);
}

void verify_against_oracle(const ExperimentConfig& cfg, const Trajectory& traj) {
    const int photons = total_photons(cfg.problem.state);
    const auto* pair = std::get_if<CoherentPair>(&cfg.problem.state);
    if (photons > 2 || (pair && pair->nbar_total() > 4.0)) {
        throw ConfigError(
            "--oracle supports Fock inputs with at most 2 photons and "
            "coherent inputs with nbar <= 4");
    }
    CollisionModelConfig oracle_cfg;
    const CollisionResult oracle =
        collision_model_pt(oracle_cfg, cfg.problem.params, cfg.problem.env_r,
                           cfg.problem.env_l, cfg.problem.state);
    double deviation = 0.0;
    for (std::size_t i = 0; i < oracle.trajectory.times.size(); ++i) {
        const double t = oracle.trajectory.times[i];
        if (t > traj.times.back()) break;
        deviation = std::max(
            deviation, std::abs(oracle.trajectory.p_values[i] - interpolate(traj, t)));
    }
    std::cout << "oracle_deviation=" << format_double(deviation)
              << " oracle_norm_drift=" << format_double(oracle.norm_drift)
              << "\n";
    if (deviation > 0.02) {
        throw NumericalError("collision-model oracle deviates by " +
                             format_double(deviation));
    }
}

SweepResult scan_for_config(const ExperimentConfig& cfg) {
    const SweepSpec& sweep = *cfg.sweep;
    const Problem& base = cfg.problem;
    if (sweep.axis == "bandwidth") {
        return scan_bandwidth(base, sweep.grid);
    }
    if (sweep.axis == "photon-number") {
        const PhotonNumberScan matrix =
            scan_photon_number(base, sweep.grid, {base.env_r.bandwidth()});
        SweepResult result;
        result.axis = "photon-number";
        result.grid = sweep.grid;
        result.provenance = matrix.provenance;
        for (std::size_t i = 0; i < sweep.grid.size(); ++i) {
            result.p_max.push_back(matrix.p_max[i][0]);
            result.t_at_max.push_back(matrix.t_at_max[i][0]);
        }
        result.argmax = static_cast<std::size_t>(
            std::max_element(result.p_max.begin(), result.p_max.end()) -
            result.p_max.begin());
        return result;
    }
    // phase
    const auto* pair = std::get_if<CoherentPair>(&base.state);
    if (pair == nullptr) {
        throw ConfigError("sweep.axis=phase requires state.kind=coherent");
    }
    const PhaseScan matrix = scan_phase(base, sweep.grid, {pair->nbar_r});
    SweepResult result;
    result.axis = "phase";
    result.grid = sweep.grid;
    result.provenance = matrix.provenance;
    for (std::size_t i = 0; i < sweep.grid.size(); ++i) {
        result.p_max.push_back(matrix.p_max[i][0]);
        result.t_at_max.push_back(matrix.t_at_max[i][0]);
    }
    result.argmax = static_cast<std::size_t>(
        std::max_element(result.p_max.begin(), result.p_max.end()) -
        result.p_max.begin());
    return result;
}

}  // namespace

int run_simulate(const std::string& config_path, bool oracle_check) {
    return run_guarded([&]() {
        const ExperimentConfig cfg =
            parse_experiment_config(parse_key_values_file(config_path));
        Trajectory traj = simulate(cfg.problem);
        for (const auto& item : cfg.echo()) traj.metadata.push_back(item);
        write_trajectory_csv(cfg.output_path, traj);
        std::printf("p_max=%.3f at t=%.3f\n", traj.p_max, traj.t_at_max);
        if (oracle_check) verify_against_oracle(cfg, traj);
    });
}

int run_scan(const std::string& config_path) {
    return run_guarded([&]() {
        const ExperimentConfig cfg =
            parse_experiment_config(parse_key_values_file(config_path));
        if (!cfg.sweep) {
            throw ConfigError("sweep.axis is required for the scan command");
        }
        SweepResult result = scan_for_config(cfg);
        for (const auto& item : cfg.echo()) result.provenance.push_back(item);
        if (cfg.sweep->axis == "bandwidth" && cfg.sweep->optimize) {
            const BandwidthOptimum best = optimize_bandwidth(
                cfg.problem, cfg.sweep->grid.front(), cfg.sweep->grid.back());
            result.provenance.emplace_back("optimum.omega",
                                           format_double(best.omega));
            result.provenance.emplace_back("optimum.p_max",
                                           format_double(best.p_max));
            std::printf("optimum: p_max=%.3f at omega=%.4f\n", best.p_max,
                        best.omega);
        }
        write_sweep_csv(cfg.output_path, result);
        std::printf("p_max=%.3f at t=%.3f\n", result.p_max[result.argmax],
                    result.t_at_max[result.argmax]);
    });
}

int run_reproduce_figure(const std::string& figure_id, const std::string& outdir) {
    return run_guarded([&]() {
        int id = 0;
        try {
            id = parse_int("figure id", figure_id);
        } catch (const ConfigError&) {
            throw ConfigError("figure id must be an integer in [2, 8]");
        }
        const std::vector<std::string> files = reproduce_figure(id, outdir);
        for (const std::string& f : files) std::cout << "wrote " << f << "\n";
    });
}

}  // namespace cli

}  // namespace atompulse
