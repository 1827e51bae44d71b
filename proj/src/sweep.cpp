#include "atompulse/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <thread>

namespace atompulse {

namespace {

std::size_t thread_count() {
    if (const char* env = std::getenv("ATOMPULSE_THREADS")) {
        const long n = std::atol(env);
        if (n >= 1) return static_cast<std::size_t>(n);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

void check_grid(const std::vector<double>& omegas) {
    if (omegas.empty()) throw ConfigError("sweep.grid must not be empty");
    for (double w : omegas) {
        if (!(w > 0.0)) throw ConfigError("sweep.grid: bandwidths must be positive");
    }
}

std::size_t argmax_of(const std::vector<double>& values) {
    return static_cast<std::size_t>(
        std::max_element(values.begin(), values.end()) - values.begin());
}

}  // namespace

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min(thread_count(), std::max<std::size_t>(count, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

SweepResult scan_bandwidth(const Problem& problem,
                           const std::vector<double>& omegas) {
    check_grid(omegas);
    SweepResult result;
    result.axis = "bandwidth";
    result.grid = omegas;
    result.p_max.resize(omegas.size());
    result.t_at_max.resize(omegas.size());
    parallel_for(omegas.size(), [&](std::size_t i) {
        try {
            const Trajectory traj = simulate(problem.with_bandwidth(omegas[i]));
            result.p_max[i] = traj.p_max;
            result.t_at_max[i] = traj.t_at_max;
        } catch (const NumericalError& err) {
            throw NumericalError("at bandwidth " + std::to_string(omegas[i]) +
                                 ": " + err.what());
        }
    });
    result.argmax = argmax_of(result.p_max);
    result.provenance.emplace_back("state", describe(problem.state));
    result.provenance.emplace_back("envelope.kind",
                                   to_string(problem.env_r.kind()));
    return result;
}

bool is_unimodal(const std::vector<double>& values) {
    bool rising = true;
    for (std::size_t i = 1; i < values.size(); ++i) {
        const double d = values[i] - values[i - 1];
        if (rising) {
            if (d < -1e-12) rising = false;
        } else if (d > 1e-12) {
            return false;
        }
    }
    return true;
}

double golden_section_maximize(const std::function<double(double)>& f,
                               double lo, double hi, double rel_tol,
                               double* best_value) {
    if (!(lo <= hi)) throw ConfigError("bracket: lo must not exceed hi");
    if (lo == hi) {
        if (best_value) *best_value = f(lo);
        return lo;
    }
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int iter = 0; iter < 200 && (b - a) > rel_tol * std::max(std::abs(a), std::abs(b));
         ++iter) {
        if (f1 > f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = f(x2);
        }
    }
    const double x_best = f1 > f2 ? x1 : x2;
    if (best_value) *best_value = std::max(f1, f2);
    return x_best;
}

BandwidthOptimum optimize_bandwidth(const Problem& problem, double omega_lo,
                                    double omega_hi) {
    if (!(omega_lo > 0.0) || !(omega_hi > 0.0)) {
        throw ConfigError("bracket: bandwidths must be positive");
    }
    if (omega_lo > omega_hi) std::swap(omega_lo, omega_hi);

    auto p_max_at = [&](double omega) {
        return simulate(problem.with_bandwidth(omega)).p_max;
    };

    BandwidthOptimum best;
    if (omega_lo == omega_hi) {
        best.omega = omega_lo;
        best.p_max = p_max_at(omega_lo);
        return best;
    }

    // Coarse log-spaced scan; doubles as the unimodality check.
    constexpr std::size_t kCoarse = 17;
    std::vector<double> grid(kCoarse);
    const double step = std::log(omega_hi / omega_lo) / (kCoarse - 1);
    for (std::size_t i = 0; i < kCoarse; ++i) {
        grid[i] = omega_lo * std::exp(step * static_cast<double>(i));
    }
    const SweepResult coarse = scan_bandwidth(problem, grid);

    if (!is_unimodal(coarse.p_max)) {
        std::cerr << "optimize_bandwidth: P_max is not unimodal on the coarse "
                     "scan; falling back to a dense grid\n";
        constexpr std::size_t kDense = 200;
        std::vector<double> dense(kDense);
        const double dstep = std::log(omega_hi / omega_lo) / (kDense - 1);
        for (std::size_t i = 0; i < kDense; ++i) {
            dense[i] = omega_lo * std::exp(dstep * static_cast<double>(i));
        }
        const SweepResult full = scan_bandwidth(problem, dense);
        best.omega = full.grid[full.argmax];
        best.p_max = full.p_max[full.argmax];
        best.unimodal = false;
        return best;
    }

    const std::size_t k = coarse.argmax;
    const double lo = grid[k > 0 ? k - 1 : k];
    const double hi = grid[k + 1 < grid.size() ? k + 1 : k];
    double refined_value = 0.0;
    const double refined = golden_section_maximize(p_max_at, lo, hi, 1e-3,
                                                   &refined_value);
    if (refined_value >= coarse.p_max[k]) {
        best.omega = refined;
        best.p_max = refined_value;
    } else {
        best.omega = grid[k];
        best.p_max = coarse.p_max[k];
    }
    return best;
}

PhotonNumberScan scan_photon_number(const Problem& base,
                                    const std::vector<double>& photon_numbers,
                                    const std::vector<double>& omegas) {
    check_grid(omegas);
    if (photon_numbers.empty()) {
        throw ConfigError("sweep.photon_numbers must not be empty");
    }
    const bool coherent = std::holds_alternative<CoherentPair>(base.state);
    if (!coherent && !std::holds_alternative<EvenFock>(base.state)) {
        throw ConfigError(
            "sweep: photon-number scans need an even-fock or coherent state");
    }

    PhotonNumberScan scan;
    scan.photon_numbers = photon_numbers;
    scan.omegas = omegas;
    scan.p_max.assign(photon_numbers.size(),
                      std::vector<double>(omegas.size(), 0.0));
    scan.t_at_max.assign(photon_numbers.size(),
                         std::vector<double>(omegas.size(), 0.0));

    const std::size_t cells = photon_numbers.size() * omegas.size();
    parallel_for(cells, [&](std::size_t cell) {
        const std::size_t i = cell / omegas.size();
        const std::size_t j = cell % omegas.size();
        Problem problem = base.with_bandwidth(omegas[j]);
        if (coherent) {
            const double nbar = photon_numbers[i];
            problem.state = CoherentPair{0.5 * nbar, 0.5 * nbar, 0.0};
        } else {
            problem.state = EvenFock{static_cast<int>(photon_numbers[i])};
        }
        try {
            const Trajectory traj = simulate(problem);
            scan.p_max[i][j] = traj.p_max;
            scan.t_at_max[i][j] = traj.t_at_max;
        } catch (const CapacityError& err) {
            throw CapacityError("at photon number " +
                                std::to_string(photon_numbers[i]) + ": " +
                                err.what());
        }
    });
    scan.provenance.emplace_back("state.kind",
                                 coherent ? "coherent-even" : "even-fock");
    scan.provenance.emplace_back("envelope.kind", to_string(base.env_r.kind()));
    return scan;
}

PhaseScan scan_phase(const Problem& base, const std::vector<double>& phis,
                     const std::vector<double>& nbar_r_grid) {
    const auto* pair = std::get_if<CoherentPair>(&base.state);
    if (pair == nullptr) {
        throw ConfigError("sweep: phase scans need a coherent state");
    }
    if (phis.empty() || nbar_r_grid.empty()) {
        throw ConfigError("sweep: phase/nbar grids must not be empty");
    }

    PhaseScan scan;
    scan.phis = phis;
    scan.nbar_r = nbar_r_grid;
    scan.p_max.assign(phis.size(), std::vector<double>(nbar_r_grid.size(), 0.0));
    scan.t_at_max.assign(phis.size(),
                         std::vector<double>(nbar_r_grid.size(), 0.0));

    const std::size_t cells = phis.size() * nbar_r_grid.size();
    parallel_for(cells, [&](std::size_t cell) {
        const std::size_t i = cell / nbar_r_grid.size();
        const std::size_t j = cell % nbar_r_grid.size();
        Problem problem = base;
        problem.state = CoherentPair{nbar_r_grid[j], pair->nbar_l, phis[i]};
        const Trajectory traj = simulate(problem);
        scan.p_max[i][j] = traj.p_max;
        scan.t_at_max[i][j] = traj.t_at_max;
    });
    scan.provenance.emplace_back("state.nbar_l", std::to_string(pair->nbar_l));
    scan.provenance.emplace_back("envelope.kind", to_string(base.env_r.kind()));
    return scan;
}

}  // namespace atompulse
