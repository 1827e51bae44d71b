#include <cmath>
#include <string>
#include <vector>

#include "atompulse/config.hpp"
#include "atompulse/sweep.hpp"

namespace atompulse {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<double> log_grid(double lo, double hi, int count) {
    std::vector<double> grid(count);
    for (int i = 0; i < count; ++i) {
        const double f = static_cast<double>(i) / (count - 1);
        grid[i] = lo * std::pow(hi / lo, f);
    }
    return grid;
}

Problem base_problem(PulseShape shape, double omega, StateSpec state) {
    return Problem{std::move(state), PulseEnvelope(shape, omega),
                   PulseEnvelope(shape, omega), SystemParams{}, {}};
}

std::string trim_num(double v) { return format_double(v); }

struct FigureWriter {
    std::string outdir;
    std::vector<std::string> files;

    std::string path(const std::string& name) {
        return outdir.empty() ? name : outdir + "/" + name;
    }

    void sweep(const std::string& name, SweepResult result) {
        const std::string p = path(name);
        write_sweep_csv(p, result);
        files.push_back(p);
    }

    void trajectory(const std::string& name, const Trajectory& traj) {
        const std::string p = path(name);
        write_trajectory_csv(p, traj);
        files.push_back(p);
    }

    // One row per photon number at a fixed bandwidth.
    void matrix_column(const std::string& name, const PhotonNumberScan& scan,
                       std::size_t omega_idx) {
        SweepResult result;
        result.axis = "photon-number";
        result.grid = scan.photon_numbers;
        result.provenance = scan.provenance;
        result.provenance.emplace_back("bandwidth",
                                       trim_num(scan.omegas[omega_idx]));
        for (std::size_t i = 0; i < scan.photon_numbers.size(); ++i) {
            result.p_max.push_back(scan.p_max[i][omega_idx]);
            result.t_at_max.push_back(scan.t_at_max[i][omega_idx]);
        }
        result.argmax = 0;
        for (std::size_t i = 1; i < result.p_max.size(); ++i) {
            if (result.p_max[i] > result.p_max[result.argmax]) result.argmax = i;
        }
        sweep(name, std::move(result));
    }

    // One row per bandwidth at a fixed photon number.
    void matrix_row(const std::string& name, const PhotonNumberScan& scan,
                    std::size_t photon_idx) {
        SweepResult result;
        result.axis = "bandwidth";
        result.grid = scan.omegas;
        result.provenance = scan.provenance;
        result.provenance.emplace_back(
            "photon_number", trim_num(scan.photon_numbers[photon_idx]));
        result.p_max = scan.p_max[photon_idx];
        result.t_at_max = scan.t_at_max[photon_idx];
        result.argmax = 0;
        for (std::size_t i = 1; i < result.p_max.size(); ++i) {
            if (result.p_max[i] > result.p_max[result.argmax]) result.argmax = i;
        }
        sweep(name, std::move(result));
    }
};

const std::vector<double> kFigureOmegas{0.1, 0.8, 1.5, 10.0};

void figure2(FigureWriter& w) {
    const std::vector<double> grid = log_grid(0.05, 20.0, 60);
    const auto shape = PulseShape::RisingExponential;
    w.sweep("fig2_fock_single.csv",
            scan_bandwidth(base_problem(shape, 1.0, fock_basis_state(1, 0)), grid));
    w.sweep("fig2_fock_even.csv",
            scan_bandwidth(base_problem(shape, 1.0, EvenFock{1}), grid));
    w.sweep("fig2_coherent_single.csv",
            scan_bandwidth(base_problem(shape, 1.0, CoherentPair{1.0, 0.0, 0.0}),
                           grid));
    w.sweep("fig2_coherent_even.csv",
            scan_bandwidth(base_problem(shape, 1.0, CoherentPair{0.5, 0.5, 0.0}),
                           grid));
}

void figure3(FigureWriter& w) {
    const auto shape = PulseShape::RisingExponential;
    const std::vector<std::pair<std::string, StateSpec>> cases = {
        {"fig3_fock_single.csv", fock_basis_state(1, 0)},
        {"fig3_fock_even.csv", EvenFock{1}},
        {"fig3_coherent_single.csv", CoherentPair{1.0, 0.0, 0.0}},
        {"fig3_coherent_even.csv", CoherentPair{0.5, 0.5, 0.0}},
    };
    for (const auto& [name, state] : cases) {
        Problem problem = base_problem(shape, 1.0, state);
        const BandwidthOptimum best = optimize_bandwidth(problem, 0.1, 10.0);
        Trajectory traj = simulate(problem.with_bandwidth(best.omega));
        traj.metadata.emplace_back("optimum.omega", trim_num(best.omega));
        w.trajectory(name, traj);
    }
}

void figure4(FigureWriter& w) {
    for (double omega : kFigureOmegas) {
        for (int n = 1; n <= 5; ++n) {
            w.trajectory(
                "fig4_fock_omega" + trim_num(omega) + "_n" + std::to_string(n) +
                    ".csv",
                simulate(base_problem(PulseShape::Rectangular, omega, EvenFock{n})));
            w.trajectory(
                "fig4_coherent_omega" + trim_num(omega) + "_n" +
                    std::to_string(n) + ".csv",
                simulate(base_problem(PulseShape::Rectangular, omega,
                                      CoherentPair{0.5 * n, 0.5 * n, 0.0})));
        }
    }
}

void figure5(FigureWriter& w) {
    std::vector<double> photons;
    for (int n = 1; n <= 10; ++n) photons.push_back(n);
    const Problem fock = base_problem(PulseShape::Rectangular, 1.0, EvenFock{1});
    const Problem coherent =
        base_problem(PulseShape::Rectangular, 1.0, CoherentPair{0.5, 0.5, 0.0});
    const PhotonNumberScan fock_scan =
        scan_photon_number(fock, photons, kFigureOmegas);
    const PhotonNumberScan coherent_scan =
        scan_photon_number(coherent, photons, kFigureOmegas);
    for (std::size_t j = 0; j < kFigureOmegas.size(); ++j) {
        w.matrix_column("fig5_fock_omega" + trim_num(kFigureOmegas[j]) + ".csv",
                        fock_scan, j);
        w.matrix_column(
            "fig5_coherent_omega" + trim_num(kFigureOmegas[j]) + ".csv",
            coherent_scan, j);
    }
}

void figure6(FigureWriter& w) {
    const std::vector<double> grid = log_grid(0.05, 20.0, 60);
    std::vector<double> photons;
    for (int n = 1; n <= 5; ++n) photons.push_back(n);
    const Problem fock = base_problem(PulseShape::Rectangular, 1.0, EvenFock{1});
    const Problem coherent =
        base_problem(PulseShape::Rectangular, 1.0, CoherentPair{0.5, 0.5, 0.0});
    const PhotonNumberScan fock_scan = scan_photon_number(fock, photons, grid);
    const PhotonNumberScan coherent_scan =
        scan_photon_number(coherent, photons, grid);
    for (std::size_t i = 0; i < photons.size(); ++i) {
        w.matrix_row("fig6_fock_n" + std::to_string(i + 1) + ".csv", fock_scan, i);
        w.matrix_row("fig6_coherent_n" + std::to_string(i + 1) + ".csv",
                     coherent_scan, i);
    }
}

void figure7(FigureWriter& w) {
    const std::vector<double> grid = log_grid(0.05, 20.0, 60);
    const Problem f11 =
        base_problem(PulseShape::Rectangular, 1.0, fock_basis_state(1, 1));
    const Problem f10 =
        base_problem(PulseShape::Rectangular, 1.0, fock_basis_state(1, 0));
    w.sweep("fig7_pmax_f11.csv", scan_bandwidth(f11, grid));
    w.sweep("fig7_pmax_f10.csv", scan_bandwidth(f10, grid));
    const BandwidthOptimum best11 = optimize_bandwidth(f11, 0.1, 10.0);
    const BandwidthOptimum best10 = optimize_bandwidth(f10, 0.1, 10.0);
    w.trajectory("fig7_pt_f11.csv", simulate(f11.with_bandwidth(best11.omega)));
    w.trajectory("fig7_pt_f10.csv", simulate(f10.with_bandwidth(best10.omega)));
}

void figure8(FigureWriter& w) {
    // Rectangular pulses at the two-photon optimum bandwidth 2 gamma0,
    // nbar_l = 1, sweeping nbar_r for three relative phases.
    const Problem base =
        base_problem(PulseShape::Rectangular, 2.0, CoherentPair{1.0, 1.0, 0.0});
    std::vector<double> nbar_grid;
    for (int i = 0; i <= 20; ++i) nbar_grid.push_back(0.2 * i);
    const std::vector<double> phis{0.0, 0.5 * kPi, kPi};
    const std::vector<std::string> names{"fig8_phi0.csv", "fig8_phihalfpi.csv",
                                         "fig8_phipi.csv"};
    const PhaseScan scan = scan_phase(base, phis, nbar_grid);
    for (std::size_t i = 0; i < phis.size(); ++i) {
        SweepResult result;
        result.axis = "nbar_r";
        result.grid = nbar_grid;
        result.provenance = scan.provenance;
        result.provenance.emplace_back("phi", trim_num(phis[i]));
        result.p_max = scan.p_max[i];
        result.t_at_max = scan.t_at_max[i];
        result.argmax = 0;
        for (std::size_t j = 1; j < result.p_max.size(); ++j) {
            if (result.p_max[j] > result.p_max[result.argmax]) result.argmax = j;
        }
        w.sweep(names[i], std::move(result));
    }
}

}  // namespace

std::vector<std::string> reproduce_figure(int id, const std::string& outdir) {
    FigureWriter writer{outdir, {}};
    switch (id) {
        case 2: figure2(writer); break;
        case 3: figure3(writer); break;
        case 4: figure4(writer); break;
        case 5: figure5(writer); break;
        case 6: figure6(writer); break;
        case 7: figure7(writer); break;
        case 8: figure8(writer); break;
        default:
            throw ConfigError("unknown figure id " + std::to_string(id) +
                              " (expected 2..8)");
    }
    return writer.files;
}

}  // namespace atompulse
