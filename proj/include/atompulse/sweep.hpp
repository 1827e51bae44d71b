#pragma once

#include <functional>
#include <string>
#include <vector>

#include "atompulse/problem.hpp"

namespace atompulse {

struct SweepResult {
    std::string axis;
    std::vector<double> grid;
    std::vector<double> p_max;
    std::vector<double> t_at_max;
    std::size_t argmax = 0;
    std::vector<std::pair<std::string, std::string>> provenance;
};

struct BandwidthOptimum {
    double omega = 0.0;
    double p_max = 0.0;
    bool unimodal = true;   // false: coarse scan was not unimodal, dense
                            // grid argmax returned instead
};

struct PhotonNumberScan {
    std::vector<double> photon_numbers;         // n or nbar
    std::vector<double> omegas;
    std::vector<std::vector<double>> p_max;     // [photon][omega]
    std::vector<std::vector<double>> t_at_max;
    std::vector<std::pair<std::string, std::string>> provenance;
};

struct PhaseScan {
    std::vector<double> phis;
    std::vector<double> nbar_r;
    std::vector<std::vector<double>> p_max;     // [phi][nbar_r]
    std::vector<std::vector<double>> t_at_max;
    std::vector<std::pair<std::string, std::string>> provenance;
};

// One trajectory per grid point, both envelopes rebuilt at each bandwidth.
// Grid must be positive; runs in parallel (ATOMPULSE_THREADS) with results
// bit-identical to a serial run.
SweepResult scan_bandwidth(const Problem& problem,
                           const std::vector<double>& omegas);

// Golden-section refinement of P_max(Omega) to relative bracket width 1e-3,
// after a coarse unimodality check. Falls back to a dense-grid argmax when
// the coarse scan is not unimodal.
BandwidthOptimum optimize_bandwidth(const Problem& problem, double omega_lo,
                                    double omega_hi);

// P_max over (photon number, bandwidth). The base problem must carry an
// even-mode state (EvenFock or CoherentPair); the photon number of the base
// state is replaced per row. Fock rows use the integer part of the entry.
PhotonNumberScan scan_photon_number(const Problem& base,
                                    const std::vector<double>& photon_numbers,
                                    const std::vector<double>& omegas);

// P_max over (relative phase, nbar_r) with nbar_l fixed by the base state.
PhaseScan scan_phase(const Problem& base, const std::vector<double>& phis,
                     const std::vector<double>& nbar_r_grid);

// Scalar maximizer on [lo, hi]; terminates at relative bracket width
// rel_tol. Returns the argmax; *best_value receives f there.
double golden_section_maximize(const std::function<double(double)>& f,
                               double lo, double hi, double rel_tol,
                               double* best_value = nullptr);

// Rises to a single peak and then falls (plateaus allowed).
bool is_unimodal(const std::vector<double>& values);

// Runs fn(i) for i in [0, count) on the configured number of threads
// (ATOMPULSE_THREADS, default hardware concurrency).
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace atompulse
