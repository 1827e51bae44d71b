#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "atompulse/oracles.hpp"
#include "atompulse/sweep.hpp"
#include "helpers.hpp"

using namespace atompulse;
using test_helpers::logspace;
using test_helpers::ScopedEnv;

namespace {

Problem even_fock_rising(int n) {
    return Problem{EvenFock{n}, PulseEnvelope(PulseShape::RisingExponential, 1.0),
                   PulseEnvelope(PulseShape::RisingExponential, 1.0),
                   SystemParams{}, {}};
}

}  // namespace

TEST_SUITE_BEGIN("sweep");

TEST_CASE("golden section on the analytic single-photon objective") {
    auto objective = [](double omega) {
        return analytic_single_photon_pmax(omega, 1.0, 1.0);
    };
    double value = 0.0;
    const double omega = golden_section_maximize(objective, 0.1, 10.0, 1e-3, &value);
    CHECK(omega == doctest::Approx(1.0).epsilon(2e-3));
    CHECK(value == doctest::Approx(1.0).epsilon(1e-6));

    // degenerate bracket returns the point itself
    const double fixed = golden_section_maximize(objective, 2.5, 2.5, 1e-3, &value);
    CHECK(fixed == 2.5);
    CHECK(value == doctest::Approx(objective(2.5)).epsilon(1e-15));
}

TEST_CASE("bandwidth scan for a single-mode photon stays below one half") {
    Problem problem = even_fock_rising(1);
    problem.state = fock_basis_state(1, 0);
    const SweepResult result = scan_bandwidth(problem, logspace(0.1, 10.0, 15));
    for (double p : result.p_max) CHECK(p <= 0.5 + 1e-6);

    const SweepResult at_one = scan_bandwidth(problem, {1.0});
    CHECK(at_one.p_max[0] == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("optimizer finds the even-mode single-photon optimum") {
    const BandwidthOptimum best = optimize_bandwidth(even_fock_rising(1), 0.1, 10.0);
    CHECK(best.unimodal);
    CHECK(best.omega == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(best.p_max == doctest::Approx(1.0).epsilon(1e-3));

    // the refined value never drops below the best coarse point
    const SweepResult coarse =
        scan_bandwidth(even_fock_rising(1), logspace(0.1, 10.0, 17));
    CHECK(best.p_max >= coarse.p_max[coarse.argmax] - 1e-12);
}

TEST_CASE("unimodality detector") {
    CHECK(is_unimodal({0.1, 0.4, 0.9, 0.5, 0.2}));
    CHECK(is_unimodal({0.1, 0.2, 0.3}));
    CHECK(is_unimodal({0.9, 0.5, 0.2}));
    CHECK(is_unimodal({0.5, 0.5, 0.5}));
    CHECK_FALSE(is_unimodal({0.1, 0.9, 0.2, 0.8}));
}

TEST_CASE("grid order permutes outputs, nothing else") {
    Problem problem = even_fock_rising(1);
    const std::vector<double> grid{0.5, 1.0, 2.0, 4.0};
    std::vector<double> reversed(grid.rbegin(), grid.rend());
    const SweepResult fwd = scan_bandwidth(problem, grid);
    const SweepResult rev = scan_bandwidth(problem, reversed);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(fwd.p_max[i] == rev.p_max[grid.size() - 1 - i]);
        CHECK(fwd.t_at_max[i] == rev.t_at_max[grid.size() - 1 - i]);
    }
}

TEST_CASE("parallel sweeps are bit-identical to serial ones") {
    Problem problem = even_fock_rising(2);
    const std::vector<double> grid = logspace(0.3, 5.0, 12);
    SweepResult serial, parallel;
    {
        ScopedEnv env("ATOMPULSE_THREADS", "1");
        serial = scan_bandwidth(problem, grid);
    }
    {
        ScopedEnv env("ATOMPULSE_THREADS", "4");
        parallel = scan_bandwidth(problem, grid);
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(serial.p_max[i] == parallel.p_max[i]);
        CHECK(serial.t_at_max[i] == parallel.t_at_max[i]);
    }
}

TEST_CASE("photon-number scan reproduces the Fock ordering flips") {
    Problem base{EvenFock{1}, PulseEnvelope(PulseShape::Rectangular, 1.0),
                 PulseEnvelope(PulseShape::Rectangular, 1.0), SystemParams{}, {}};
    const PhotonNumberScan scan =
        scan_photon_number(base, {1, 2, 3, 4, 5}, {0.8, 1.5});

    // Omega = 0.8: one photon beats two
    CHECK(scan.p_max[1][0] < scan.p_max[0][0]);
    // Omega = 1.5: two photons beat every other n in [1,5]
    std::size_t argmax = 0;
    for (std::size_t i = 1; i < scan.photon_numbers.size(); ++i) {
        if (scan.p_max[i][1] > scan.p_max[argmax][1]) argmax = i;
    }
    CHECK(scan.photon_numbers[argmax] == 2);
}

TEST_CASE("coherent photon-number scan grows monotonically") {
    Problem base{CoherentPair{0.5, 0.5, 0.0},
                 PulseEnvelope(PulseShape::Rectangular, 1.0),
                 PulseEnvelope(PulseShape::Rectangular, 1.0), SystemParams{}, {}};
    const PhotonNumberScan scan =
        scan_photon_number(base, {1, 2, 3}, {1.5});
    CHECK(scan.p_max[0][0] < scan.p_max[1][0]);
    CHECK(scan.p_max[1][0] < scan.p_max[2][0]);
}

TEST_CASE("phase scan shows full destructive interference at phi = pi") {
    const double pi = 3.14159265358979323846;
    Problem base{CoherentPair{1.0, 1.0, 0.0},
                 PulseEnvelope(PulseShape::Rectangular, 2.0),
                 PulseEnvelope(PulseShape::Rectangular, 2.0), SystemParams{}, {}};
    const PhaseScan scan = scan_phase(base, {0.0, 0.5 * pi, pi}, {0.5, 1.0, 2.0});

    // phi = pi touches zero exactly at nbar_r = nbar_l = 1
    CHECK(scan.p_max[2][1] <= 1e-10);
    // intermediate phase sits strictly between the extremes
    for (std::size_t j = 0; j < 3; ++j) {
        CHECK(scan.p_max[1][j] < scan.p_max[0][j]);
        CHECK(scan.p_max[1][j] > scan.p_max[2][j]);
    }
}

TEST_CASE("Fock bandwidth curves cross, coherent ones do not") {
    const std::vector<double> omegas{0.3, 0.8, 1.5, 3.0, 8.0};
    const std::vector<double> photons{1, 2, 3};

    Problem fock{EvenFock{1}, PulseEnvelope(PulseShape::Rectangular, 1.0),
                 PulseEnvelope(PulseShape::Rectangular, 1.0), SystemParams{}, {}};
    const PhotonNumberScan fock_scan = scan_photon_number(fock, photons, omegas);
    bool crossing = false;
    for (std::size_t a = 0; a < photons.size() && !crossing; ++a) {
        for (std::size_t b = a + 1; b < photons.size() && !crossing; ++b) {
            bool above = false, below = false;
            for (std::size_t j = 0; j < omegas.size(); ++j) {
                (fock_scan.p_max[a][j] > fock_scan.p_max[b][j] ? above : below) =
                    true;
            }
            crossing = above && below;
        }
    }
    CHECK(crossing);

    Problem coherent{CoherentPair{0.5, 0.5, 0.0},
                     PulseEnvelope(PulseShape::Rectangular, 1.0),
                     PulseEnvelope(PulseShape::Rectangular, 1.0), SystemParams{},
                     {}};
    const PhotonNumberScan c_scan = scan_photon_number(coherent, photons, omegas);
    for (std::size_t i = 1; i < photons.size(); ++i) {
        for (std::size_t j = 0; j < omegas.size(); ++j) {
            CHECK(c_scan.p_max[i][j] > c_scan.p_max[i - 1][j]);
        }
    }
}

TEST_CASE("capacity errors name the offending photon number") {
    Problem base{EvenFock{1}, PulseEnvelope(PulseShape::Rectangular, 1.0),
                 PulseEnvelope(PulseShape::Rectangular, 1.0), SystemParams{}, {}};
    CHECK_THROWS_AS(scan_photon_number(base, {20}, {1.0}), CapacityError);
}

TEST_SUITE_END();
