#include "atompulse/problem.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "atompulse/hierarchy.hpp"

namespace atompulse {

int total_photons(const StateSpec& state) {
    if (const auto* fock = std::get_if<FockSuperposition>(&state)) {
        return fock->total_photons;
    }
    if (const auto* even = std::get_if<EvenFock>(&state)) {
        return even->n;
    }
    return -1;
}

std::string describe(const StateSpec& state) {
    std::ostringstream out;
    if (const auto* fock = std::get_if<FockSuperposition>(&state)) {
        out << "fock N=" << fock->total_photons << " [";
        bool first = true;
        for (const auto& [occ, amp] : fock->coefficients) {
            if (!first) out << " ";
            first = false;
            out << "(" << occ.n_r << "," << occ.n_l << "):" << amp.real();
            if (amp.imag() != 0.0) out << (amp.imag() > 0 ? "+" : "") << amp.imag() << "i";
        }
        out << "]";
    } else if (const auto* even = std::get_if<EvenFock>(&state)) {
        out << "even-fock n=" << even->n;
    } else {
        const auto& pair = std::get<CoherentPair>(state);
        out << "coherent nbar_r=" << pair.nbar_r << " nbar_l=" << pair.nbar_l
            << " phi=" << pair.phi;
    }
    return out.str();
}

Problem Problem::with_bandwidth(double omega) const {
    Problem copy = *this;
    copy.env_r = env_r.with_bandwidth(omega);
    copy.env_l = env_l.with_bandwidth(omega);
    return copy;
}

void Problem::validate() const {
    params.validate();
    if (const auto* fock = std::get_if<FockSuperposition>(&state)) {
        fock->validate();
    } else if (const auto* even = std::get_if<EvenFock>(&state)) {
        if (even->n < 0) throw ConfigError("state.n must be nonnegative");
        if (!env_r.same_shape(env_l)) {
            throw ConfigError(
                "state: even-mode input requires identical envelopes on both "
                "modes");
        }
    } else {
        std::get<CoherentPair>(state).validate();
    }
}

namespace {

void apply_common_overrides(IntegrationPlan& plan, const PlanOverrides& ov) {
    if (ov.method) plan.method = *ov.method;
    if (ov.abs_tol) plan.abs_tol = *ov.abs_tol;
    if (ov.rel_tol) plan.rel_tol = *ov.rel_tol;
    if (ov.fixed_dt) plan.fixed_dt = *ov.fixed_dt;
    if (ov.sample_stride) plan.sample_stride = *ov.sample_stride;
}

IntegrationPlan plan_for_envelopes(const std::vector<const PulseEnvelope*>& envs,
                                   const SystemParams& params, int photons,
                                   double drive_peak, const PlanOverrides& ov) {
    IntegrationPlan plan;
    double lo = 0.0, hi = 0.0;
    bool first = true;
    std::vector<double> marks;
    for (const PulseEnvelope* env : envs) {
        const auto [a, b] = env->support();
        lo = first ? a : std::min(lo, a);
        hi = first ? b : std::max(hi, b);
        first = false;
        for (double m : env->breakpoints()) marks.push_back(m);
    }
    plan.t_start = lo;
    plan.drive_end = hi;
    const double tail = ov.tail.value_or(5.0 / params.gamma0());
    plan.t_end = hi + tail;
    std::sort(marks.begin(), marks.end());
    for (double m : marks) {
        if (m > plan.t_start && m < plan.t_end) plan.breakpoints.push_back(m);
    }
    if (photons > 5) {
        plan.abs_tol = plan.rel_tol = 1e-8;
    }
    plan.max_step = ov.max_step.value_or(
        0.05 / std::max(params.gamma0(), drive_peak));
    apply_common_overrides(plan, ov);
    plan.validate();
    return plan;
}

std::vector<std::pair<std::string, std::string>> base_metadata(
    const Problem& problem, const IntegrationPlan& plan) {
    std::vector<std::pair<std::string, std::string>> meta;
    auto num = [](double v) {
        std::ostringstream s;
        s.precision(12);
        s << v;
        return s.str();
    };
    meta.emplace_back("state", describe(problem.state));
    meta.emplace_back("envelope.r.kind", to_string(problem.env_r.kind()));
    meta.emplace_back("envelope.r.bandwidth", num(problem.env_r.bandwidth()));
    meta.emplace_back("envelope.r.phase", num(problem.env_r.envelope_phase()));
    meta.emplace_back("envelope.r.epsilon", num(problem.env_r.truncation_epsilon()));
    meta.emplace_back("envelope.l.kind", to_string(problem.env_l.kind()));
    meta.emplace_back("envelope.l.bandwidth", num(problem.env_l.bandwidth()));
    meta.emplace_back("envelope.l.phase", num(problem.env_l.envelope_phase()));
    meta.emplace_back("envelope.l.epsilon", num(problem.env_l.truncation_epsilon()));
    meta.emplace_back("params.gamma_r", num(problem.params.gamma_r));
    meta.emplace_back("params.gamma_l", num(problem.params.gamma_l));
    meta.emplace_back("params.gamma_env", num(problem.params.gamma_env));
    meta.emplace_back("integration.method", to_string(plan.method));
    meta.emplace_back("integration.t_start", num(plan.t_start));
    meta.emplace_back("integration.t_end", num(plan.t_end));
    meta.emplace_back("integration.abs_tol", num(plan.abs_tol));
    meta.emplace_back("integration.rel_tol", num(plan.rel_tol));
    meta.emplace_back("integration.max_step", num(plan.max_step));
    if (plan.method == Method::RK4Fixed) {
        meta.emplace_back("integration.dt", num(plan.fixed_dt));
    }
    return meta;
}

Trajectory run_fock(const Problem& problem, const FockSuperposition& fock,
                    const IntegrationPlan& plan) {
    HierarchyLayout layout(fock.total_photons);
    HierarchySystem system(layout, problem.params, problem.env_r, problem.env_l);

    OdeSystem ode;
    ode.rhs = [&](double t, const VecC& y, VecC& dy) { system.rhs(t, y, dy); };
    ode.set_segment = [&](double a, double b) { system.set_segment(a, b); };
    ode.free_decay = [&](VecC& y, double dt) { system.free_decay(y, dt); };
    ode.observable = [&](double, const VecC& y) {
        return excitation_probability(layout, fock, y);
    };
    // Both conjugate sectors are stored; the symmetry between them is spare
    // information that doubles as an integration-error monitor.
    ode.monitor = [&](double t, const VecC& y) {
        const double defect = hermiticity_defect(layout, y);
        if (defect > 1e-9) {
            throw NumericalError("hermiticity defect " + std::to_string(defect) +
                                 " at t = " + std::to_string(t));
        }
    };

    VecC state = system.initial_state();
    return integrate(ode, state, plan);
}

Trajectory run_coherent(const Problem& problem, const CoherentPair& pair,
                        const IntegrationPlan& plan) {
    BlochSystem system(problem.params, problem.env_r, problem.env_l, pair);
    OdeSystem ode;
    ode.rhs = [&](double t, const VecC& y, VecC& dy) { system.rhs(t, y, dy); };
    ode.set_segment = [&](double a, double b) { system.set_segment(a, b); };
    ode.free_decay = [&](VecC& y, double dt) { system.free_decay(y, dt); };
    ode.observable = [&](double, const VecC& y) {
        return system.excitation_probability(y);
    };
    VecC state = system.initial_state();
    return integrate(ode, state, plan);
}

void check_bounds(const Trajectory& traj) {
    for (double p : traj.p_values) {
        if (p < -1e-6 || p > 1.0 + 1e-6) {
            throw NumericalError("excitation probability out of bounds: " +
                                 std::to_string(p));
        }
    }
}

}  // namespace

IntegrationPlan make_plan(const Problem& problem) {
    problem.validate();
    const int photons = total_photons(problem.state);
    double drive_peak = 0.0;
    if (const auto* pair = std::get_if<CoherentPair>(&problem.state)) {
        BlochSystem system(problem.params, problem.env_r, problem.env_l, *pair);
        drive_peak = system.drive_peak();
    } else {
        const double n = std::max(1, photons);
        drive_peak =
            2.0 * (std::sqrt(problem.params.gamma_r * n) * problem.env_r.max_abs() +
                   std::sqrt(problem.params.gamma_l * n) * problem.env_l.max_abs());
    }
    return plan_for_envelopes({&problem.env_r, &problem.env_l}, problem.params,
                              photons, drive_peak, problem.overrides);
}

Trajectory simulate(const Problem& problem) {
    problem.validate();
    const IntegrationPlan plan = make_plan(problem);

    Trajectory traj;
    if (const auto* fock = std::get_if<FockSuperposition>(&problem.state)) {
        traj = run_fock(problem, *fock, plan);
    } else if (const auto* even = std::get_if<EvenFock>(&problem.state)) {
        Problem expanded = problem;
        expanded.state = even_mode_expand(even->n);
        traj = run_fock(expanded, std::get<FockSuperposition>(expanded.state), plan);
    } else {
        traj = run_coherent(problem, std::get<CoherentPair>(problem.state), plan);
    }
    check_bounds(traj);
    traj.metadata = base_metadata(problem, plan);
    return traj;
}

Trajectory simulate_even_mode_effective(int n, const PulseEnvelope& env,
                                        const SystemParams& params,
                                        const PlanOverrides& overrides) {
    SingleModeSystem system(n, params, env);
    const IntegrationPlan plan = plan_for_envelopes(
        {&env}, params, n, system.drive_peak(), overrides);

    OdeSystem ode;
    ode.rhs = [&](double t, const VecC& y, VecC& dy) { system.rhs(t, y, dy); };
    ode.set_segment = [&](double a, double b) { system.set_segment(a, b); };
    ode.free_decay = [&](VecC& y, double dt) { system.free_decay(y, dt); };
    ode.observable = [&](double, const VecC& y) {
        return system.excitation_probability(y);
    };
    VecC state = system.initial_state();
    Trajectory traj = integrate(ode, state, plan);
    check_bounds(traj);
    traj.metadata.emplace_back("state", "even-fock-effective n=" + std::to_string(n));
    return traj;
}

Trajectory simulate_coherent_single_mode(double nbar, const PulseEnvelope& env,
                                         const SystemParams& params,
                                         const PlanOverrides& overrides) {
    params.validate();
    if (!params.symmetric()) {
        throw ConfigError(
            "params: even-mode reduction requires gamma_r == gamma_l");
    }
    // Single even mode with the boosted coupling rate; total decay unchanged.
    SystemParams effective;
    effective.gamma_r = params.gamma_even();
    effective.gamma_l = 0.0;
    effective.gamma_env = std::max(0.0, params.gamma0() - effective.gamma_r);

    CoherentPair pair{nbar, 0.0, 0.0};
    BlochSystem system(effective, env, env, pair);
    const IntegrationPlan plan = plan_for_envelopes(
        {&env}, effective, -1, system.drive_peak(), overrides);

    OdeSystem ode;
    ode.rhs = [&](double t, const VecC& y, VecC& dy) { system.rhs(t, y, dy); };
    ode.set_segment = [&](double a, double b) { system.set_segment(a, b); };
    ode.free_decay = [&](VecC& y, double dt) { system.free_decay(y, dt); };
    ode.observable = [&](double, const VecC& y) {
        return system.excitation_probability(y);
    };
    VecC state = system.initial_state();
    Trajectory traj = integrate(ode, state, plan);
    check_bounds(traj);
    traj.metadata.emplace_back("state",
                               "coherent-even-effective nbar=" + std::to_string(nbar));
    return traj;
}

}  // namespace atompulse
