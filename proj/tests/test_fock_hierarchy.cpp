#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "atompulse/hierarchy.hpp"
#include "atompulse/oracles.hpp"
#include "atompulse/problem.hpp"

using namespace atompulse;

TEST_SUITE_BEGIN("fock_hierarchy");

TEST_CASE("system params") {
    SystemParams params;
    CHECK(params.gamma0() == 1.0);
    CHECK(params.gamma_even() == doctest::Approx(1.0).epsilon(1e-15));

    SystemParams lossy{0.3, 0.3, 0.4};
    CHECK(lossy.gamma0() == doctest::Approx(1.0));
    CHECK(lossy.gamma_even() == doctest::Approx(0.6).epsilon(1e-12));

    SystemParams bad;
    bad.gamma_r = -0.1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("superposition validation") {
    const FockSuperposition not_normalized{1, {{{1, 0}, cplx(0.9, 0.0)}}};
    CHECK_THROWS_AS(not_normalized.validate(), ConfigError);
    const FockSuperposition mixed_totals{
        1, {{{1, 0}, cplx(0.7, 0.0)}, {{2, 0}, cplx(0.7, 0.0)}}};
    CHECK_THROWS_AS(mixed_totals.validate(), ConfigError);
    CHECK_NOTHROW(fock_basis_state(2, 1).validate());
}

TEST_CASE("even-mode expansion coefficients") {
    const FockSuperposition one = even_mode_expand(1);
    REQUIRE(one.coefficients.size() == 2);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (const auto& [occ, amp] : one.coefficients) {
        CHECK(amp.real() == doctest::Approx(inv_sqrt2).epsilon(1e-15));
    }

    const FockSuperposition zero = even_mode_expand(0);
    REQUIRE(zero.coefficients.size() == 1);
    CHECK(zero.coefficients[0].second == cplx(1.0, 0.0));
    CHECK(zero.coefficients[0].first == ModePair{0, 0});

    std::map<std::pair<int, int>, double> two;
    for (const auto& [occ, amp] : even_mode_expand(2).coefficients) {
        two[{occ.n_r, occ.n_l}] = amp.real();
    }
    CHECK(two[{2, 0}] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(two[{1, 1}] == doctest::Approx(inv_sqrt2).epsilon(1e-15));
    CHECK(two[{0, 2}] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("layout sector sizes") {
    const HierarchyLayout l0(0);
    CHECK(l0.state_length() == 1);
    CHECK(l0.x_count() == 1);
    CHECK(l0.y_count() == 0);

    const HierarchyLayout l1(1);
    CHECK(l1.x_count() == 5);
    CHECK(l1.y_count() == 2);
    CHECK(l1.z_count() == 2);
    CHECK(l1.state_length() == 9);

    const HierarchyLayout l2(2);
    CHECK(l2.x_count() == 14);
    CHECK(l2.y_count() == 8);
    CHECK(l2.z_count() == 8);
    CHECK(l2.state_length() == 30);

    CHECK_THROWS_AS(HierarchyLayout(13), CapacityError);
    CHECK_NOTHROW(HierarchyLayout(13, 14));
}

TEST_CASE("layout offsets are a bijection") {
    for (int n = 0; n <= 5; ++n) {
        const HierarchyLayout layout(n);
        std::set<std::size_t> seen;
        std::size_t count = 0;
        for (int t = 0; t <= n; ++t) {
            for (int m_r = 0; m_r <= t; ++m_r) {
                for (int n_r = 0; n_r <= t; ++n_r) {
                    seen.insert(layout.x_index(m_r, t - m_r, n_r, t - n_r));
                    ++count;
                }
            }
        }
        for (int t = 1; t <= n; ++t) {
            for (int m_r = 0; m_r <= t - 1; ++m_r) {
                for (int n_r = 0; n_r <= t; ++n_r) {
                    seen.insert(layout.y_index(m_r, t - 1 - m_r, n_r, t - n_r));
                    ++count;
                }
            }
            for (int m_r = 0; m_r <= t; ++m_r) {
                for (int n_r = 0; n_r <= t - 1; ++n_r) {
                    seen.insert(layout.z_index(m_r, t - m_r, n_r, t - 1 - n_r));
                    ++count;
                }
            }
        }
        CHECK(count == layout.state_length());
        CHECK(seen.size() == layout.state_length());
        CHECK(*seen.rbegin() == layout.state_length() - 1);
    }
}

TEST_CASE("ground state is stationary without drive") {
    const HierarchyLayout layout(2);
    const SystemParams params;
    const PulseEnvelope env(PulseShape::Rectangular, 1.0);
    const VecC state = initial_hierarchy_state(layout);
    VecC deriv(state.size());
    // t outside both supports: no drive
    hierarchy_rhs(layout, params, env, env, 5.0, state, deriv);
    for (const cplx& d : deriv) {
        CHECK(std::abs(d) == 0.0);
    }
}

TEST_CASE("state length mismatch is rejected") {
    const HierarchyLayout layout(1);
    VecC wrong(layout.state_length() + 1);
    VecC deriv(layout.state_length() + 1);
    CHECK_THROWS_AS(hierarchy_rhs_core(layout, SystemParams{}, cplx(0.0, 0.0),
                                       cplx(0.0, 0.0), wrong, deriv),
                    ConfigError);
}

namespace {

// Literal transcription of the first recursion level for the diagonal
// top-level families, kept independent of the production indexing.
struct Level1Literal {
    double gamma0, gamma_r, gamma_l;
    double xi_r, xi_l;  // real envelopes

    // variables: X10_10, X01_01, X00_00, Y00_10, Y00_01, Z10_00, Z01_00
    std::map<std::string, cplx> deriv(const std::map<std::string, cplx>& v) const {
        std::map<std::string, cplx> d;
        d["X10_10"] = -gamma0 * (v.at("X10_10") + 1.0) -
                      2.0 * std::sqrt(gamma_r) * xi_r *
                          (v.at("Y00_10") + v.at("Z10_00"));
        d["X01_01"] = -gamma0 * (v.at("X01_01") + 1.0) -
                      2.0 * std::sqrt(gamma_l) * xi_l *
                          (v.at("Y00_01") + v.at("Z01_00"));
        d["Y00_10"] = -0.5 * gamma0 * v.at("Y00_10") +
                      std::sqrt(gamma_r) * xi_r * v.at("X00_00");
        d["Y00_01"] = -0.5 * gamma0 * v.at("Y00_01") +
                      std::sqrt(gamma_l) * xi_l * v.at("X00_00");
        d["Z10_00"] = -0.5 * gamma0 * v.at("Z10_00") +
                      std::sqrt(gamma_r) * xi_r * v.at("X00_00");
        d["Z01_00"] = -0.5 * gamma0 * v.at("Z01_00") +
                      std::sqrt(gamma_l) * xi_l * v.at("X00_00");
        return d;
    }
};

}  // namespace

TEST_CASE("rhs matches the transcribed level-1 equations") {
    const HierarchyLayout layout(1);
    SystemParams params{0.4, 0.35, 0.25};
    const double xi_r = 0.83, xi_l = -0.41;

    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    VecC state(layout.state_length());
    for (cplx& v : state) v = cplx(uniform(rng), uniform(rng));

    VecC deriv(state.size());
    hierarchy_rhs_core(layout, params, cplx(xi_r, 0.0), cplx(xi_l, 0.0), state,
                       deriv);

    Level1Literal literal{params.gamma0(), params.gamma_r, params.gamma_l, xi_r,
                          xi_l};
    std::map<std::string, cplx> vars{
        {"X10_10", state[layout.x_index(1, 0, 1, 0)]},
        {"X01_01", state[layout.x_index(0, 1, 0, 1)]},
        {"X00_00", state[layout.x_index(0, 0, 0, 0)]},
        {"Y00_10", state[layout.y_index(0, 0, 1, 0)]},
        {"Y00_01", state[layout.y_index(0, 0, 0, 1)]},
        {"Z10_00", state[layout.z_index(1, 0, 0, 0)]},
        {"Z01_00", state[layout.z_index(0, 1, 0, 0)]},
    };
    const auto expected = literal.deriv(vars);

    CHECK(std::abs(deriv[layout.x_index(1, 0, 1, 0)] - expected.at("X10_10")) <= 1e-14);
    CHECK(std::abs(deriv[layout.x_index(0, 1, 0, 1)] - expected.at("X01_01")) <= 1e-14);
    CHECK(std::abs(deriv[layout.y_index(0, 0, 1, 0)] - expected.at("Y00_10")) <= 1e-14);
    CHECK(std::abs(deriv[layout.y_index(0, 0, 0, 1)] - expected.at("Y00_01")) <= 1e-14);
    CHECK(std::abs(deriv[layout.z_index(1, 0, 0, 0)] - expected.at("Z10_00")) <= 1e-14);
    CHECK(std::abs(deriv[layout.z_index(0, 1, 0, 0)] - expected.at("Z01_00")) <= 1e-14);
}

TEST_CASE("rhs matches the transcribed (1,1) family") {
    const HierarchyLayout layout(2);
    SystemParams params{0.5, 0.5, 0.0};
    const double xi_r = 0.6, xi_l = 0.45;

    std::mt19937 rng(777);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    VecC state(layout.state_length());
    for (cplx& v : state) v = cplx(uniform(rng), uniform(rng));

    VecC deriv(state.size());
    hierarchy_rhs_core(layout, params, cplx(xi_r, 0.0), cplx(xi_l, 0.0), state,
                       deriv);

    const double g0 = params.gamma0();
    const double sr = std::sqrt(params.gamma_r), sl = std::sqrt(params.gamma_l);
    // n_r = n_l = 1 instance of the diagonal equations
    const cplx x11 = state[layout.x_index(1, 1, 1, 1)];
    const cplx y01_11 = state[layout.y_index(0, 1, 1, 1)];
    const cplx y10_11 = state[layout.y_index(1, 0, 1, 1)];
    const cplx z11_01 = state[layout.z_index(1, 1, 0, 1)];
    const cplx z11_10 = state[layout.z_index(1, 1, 1, 0)];
    const cplx expected_x = -g0 * (x11 + 1.0) -
                            2.0 * sr * xi_r * (y01_11 + z11_01) -
                            2.0 * sl * xi_l * (y10_11 + z11_10);
    CHECK(std::abs(deriv[layout.x_index(1, 1, 1, 1)] - expected_x) <= 1e-14);

    const cplx expected_y01 = -0.5 * g0 * y01_11 +
                              sr * xi_r * state[layout.x_index(0, 1, 0, 1)] +
                              sl * xi_l * state[layout.x_index(0, 1, 1, 0)];
    CHECK(std::abs(deriv[layout.y_index(0, 1, 1, 1)] - expected_y01) <= 1e-14);

    const cplx expected_z11_01 = -0.5 * g0 * z11_01 +
                                 sr * xi_r * state[layout.x_index(0, 1, 0, 1)] +
                                 sl * xi_l * state[layout.x_index(1, 0, 0, 1)];
    CHECK(std::abs(deriv[layout.z_index(1, 1, 0, 1)] - expected_z11_01) <= 1e-14);
}

TEST_CASE("rhs preserves the conjugate-sector symmetry") {
    const HierarchyLayout layout(3);
    SystemParams params{0.45, 0.4, 0.15};
    const cplx xi_r(0.3, -0.2), xi_l(-0.1, 0.5);

    // build a state satisfying Z = conj(Y^T), X Hermitian
    std::mt19937 rng(31416);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    VecC state(layout.state_length(), cplx(0.0, 0.0));
    const int n = layout.total_photons();
    for (int t = 0; t <= n; ++t) {
        for (int m_r = 0; m_r <= t; ++m_r) {
            state[layout.x_index(m_r, t - m_r, m_r, t - m_r)] =
                cplx(uniform(rng), 0.0);
            for (int n_r = m_r + 1; n_r <= t; ++n_r) {
                const cplx v(uniform(rng), uniform(rng));
                state[layout.x_index(m_r, t - m_r, n_r, t - n_r)] = v;
                state[layout.x_index(n_r, t - n_r, m_r, t - m_r)] = std::conj(v);
            }
        }
        if (t >= 1) {
            for (int m_r = 0; m_r <= t - 1; ++m_r) {
                for (int n_r = 0; n_r <= t; ++n_r) {
                    const cplx v(uniform(rng), uniform(rng));
                    state[layout.y_index(m_r, t - 1 - m_r, n_r, t - n_r)] = v;
                    state[layout.z_index(n_r, t - n_r, m_r, t - 1 - m_r)] =
                        std::conj(v);
                }
            }
        }
    }
    CHECK(hermiticity_defect(layout, state) <= 1e-15);

    VecC deriv(state.size());
    hierarchy_rhs_core(layout, params, xi_r, xi_l, state, deriv);
    CHECK(hermiticity_defect(layout, deriv) <= 1e-14);
}

TEST_CASE("excitation probability at the initial time vanishes") {
    const HierarchyLayout layout(2);
    const VecC state = initial_hierarchy_state(layout);
    CHECK(excitation_probability(layout, even_mode_expand(2), state) == 0.0);
    CHECK(excitation_probability(layout, fock_basis_state(1, 1), state) == 0.0);

    CHECK_THROWS_AS(excitation_probability(layout, even_mode_expand(1), state),
                    ConfigError);
}

namespace {

Problem even_fock_problem(int n, PulseShape shape, double omega) {
    return Problem{EvenFock{n}, PulseEnvelope(shape, omega),
                   PulseEnvelope(shape, omega), SystemParams{}, {}};
}

}  // namespace

TEST_CASE("single even-mode photon follows the closed-form trajectory") {
    Problem problem =
        even_fock_problem(1, PulseShape::RisingExponential, 1.0);
    problem.overrides.abs_tol = problem.overrides.rel_tol = 1e-11;
    const Trajectory traj = simulate(problem);

    CHECK(traj.p_max == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(std::abs(traj.t_at_max) <= 1e-9);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double t = traj.times[i];
        if (t > 0.0) break;
        const double expected = analytic_single_photon_pmax(1.0, 1.0, 1.0) *
                                std::exp(1.0 * t);
        CHECK(traj.p_values[i] == doctest::Approx(expected).epsilon(1e-6));
    }
}

TEST_CASE("single photon in one spatial mode saturates at one half") {
    Problem problem{fock_basis_state(1, 0),
                    PulseEnvelope(PulseShape::RisingExponential, 1.0),
                    PulseEnvelope(PulseShape::RisingExponential, 1.0),
                    SystemParams{},
                    {}};
    const Trajectory traj = simulate(problem);
    CHECK(traj.p_max == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("odd-mode photons never excite the atom") {
    for (int n : {1, 2}) {
        Problem problem{odd_mode_expand(n),
                        PulseEnvelope(PulseShape::Rectangular, 1.5),
                        PulseEnvelope(PulseShape::Rectangular, 1.5),
                        SystemParams{},
                        {}};
        const Trajectory traj = simulate(problem);
        CHECK(traj.p_max <= 1e-8);
    }
}

TEST_CASE("|1,1> and (|2,0>+|0,2>)/sqrt(2) share the same dynamics") {
    const FockSuperposition mixed{
        2,
        {{{2, 0}, cplx(1.0 / std::sqrt(2.0), 0.0)},
         {{0, 2}, cplx(1.0 / std::sqrt(2.0), 0.0)}}};
    PlanOverrides tight;
    tight.abs_tol = tight.rel_tol = 1e-10;

    Problem p1{fock_basis_state(1, 1), PulseEnvelope(PulseShape::Rectangular, 2.0),
               PulseEnvelope(PulseShape::Rectangular, 2.0), SystemParams{}, tight};
    Problem p2 = p1;
    p2.state = mixed;

    const Trajectory t1 = simulate(p1);
    const Trajectory t2 = simulate(p2);
    REQUIRE(t1.times.size() == t2.times.size());
    for (std::size_t i = 0; i < t1.times.size(); ++i) {
        CHECK(t1.times[i] == t2.times[i]);
        CHECK(std::abs(t1.p_values[i] - t2.p_values[i]) <= 1e-8);
    }
    CHECK(std::abs(t1.p_max - t2.p_max) <= 1e-8);
}

TEST_CASE("|1,1> equals half of the effective two-photon even-mode curve") {
    PlanOverrides fixed;
    fixed.method = Method::RK4Fixed;
    fixed.fixed_dt = 1e-3;

    Problem p{fock_basis_state(1, 1), PulseEnvelope(PulseShape::Rectangular, 2.0),
              PulseEnvelope(PulseShape::Rectangular, 2.0), SystemParams{}, fixed};
    const Trajectory full = simulate(p);
    const Trajectory even = simulate_even_mode_effective(
        2, PulseEnvelope(PulseShape::Rectangular, 2.0), SystemParams{}, fixed);

    REQUIRE(full.times.size() == even.times.size());
    for (std::size_t i = 0; i < full.times.size(); ++i) {
        CHECK(std::abs(full.p_values[i] - 0.5 * even.p_values[i]) <= 1e-6);
    }
}

TEST_CASE("two-mode expansion agrees with the effective single-mode system") {
    PlanOverrides fixed;
    fixed.method = Method::RK4Fixed;
    fixed.fixed_dt = 1e-3;
    for (int n = 1; n <= 5; ++n) {
        Problem problem = even_fock_problem(n, PulseShape::Rectangular, 1.5);
        problem.overrides = fixed;
        const Trajectory two_mode = simulate(problem);
        const Trajectory effective = simulate_even_mode_effective(
            n, PulseEnvelope(PulseShape::Rectangular, 1.5), SystemParams{}, fixed);
        REQUIRE(two_mode.times.size() == effective.times.size());
        for (std::size_t i = 0; i < two_mode.times.size(); ++i) {
            CHECK(std::abs(two_mode.p_values[i] - effective.p_values[i]) <= 1e-6);
        }
    }
}

TEST_CASE("effective system rejects asymmetric decay") {
    CHECK_THROWS_AS(
        simulate_even_mode_effective(
            1, PulseEnvelope(PulseShape::Rectangular, 1.0),
            SystemParams{0.6, 0.4, 0.0}),
        ConfigError);
}

TEST_CASE("envelope phase does not change Fock-state excitation") {
    PlanOverrides fixed;
    fixed.method = Method::RK4Fixed;
    fixed.fixed_dt = 5e-4;

    Problem base{fock_basis_state(1, 1), PulseEnvelope(PulseShape::Rectangular, 2.0),
                 PulseEnvelope(PulseShape::Rectangular, 2.0), SystemParams{}, fixed};
    Problem shifted = base;
    shifted.env_l = shifted.env_l.with_phase(1.234);

    const Trajectory t0 = simulate(base);
    const Trajectory t1 = simulate(shifted);
    REQUIRE(t0.times.size() == t1.times.size());
    for (std::size_t i = 0; i < t0.times.size(); ++i) {
        CHECK(std::abs(t0.p_values[i] - t1.p_values[i]) <= 1e-8);
    }
}

TEST_CASE("diagonal inversion elements stay within physical bounds") {
    Problem problem = even_fock_problem(3, PulseShape::Rectangular, 1.5);
    const HierarchyLayout layout(3);
    HierarchySystem system(layout, problem.params, problem.env_r, problem.env_l);
    const FockSuperposition expansion = even_mode_expand(3);

    OdeSystem ode;
    ode.rhs = [&](double t, const VecC& y, VecC& dy) { system.rhs(t, y, dy); };
    ode.set_segment = [&](double a, double b) { system.set_segment(a, b); };
    ode.free_decay = [&](VecC& y, double dt) { system.free_decay(y, dt); };
    ode.observable = [&](double, const VecC& y) {
        return excitation_probability(layout, expansion, y);
    };
    ode.monitor = [&](double, const VecC& y) {
        for (int t = 0; t <= 3; ++t) {
            for (int m_r = 0; m_r <= t; ++m_r) {
                const cplx x = y[layout.x_index(m_r, t - m_r, m_r, t - m_r)];
                CHECK(x.real() >= -1.0 - 1e-6);
                CHECK(x.real() <= 1.0 + 1e-6);
            }
        }
    };
    VecC state = system.initial_state();
    const Trajectory traj = integrate(ode, state, make_plan(problem));
    CHECK(traj.p_max <= 1.0 + 1e-6);
    CHECK(hermiticity_defect(layout, state) <= 1e-9);
}

TEST_SUITE_END();
