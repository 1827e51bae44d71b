#pragma once

#include <optional>
#include <string>
#include <variant>

#include "atompulse/coherent.hpp"
#include "atompulse/envelope.hpp"
#include "atompulse/fock.hpp"
#include "atompulse/integrate.hpp"
#include "atompulse/params.hpp"

namespace atompulse {

// n photons in the even-parity mode; simulated by expanding into the
// two-mode hierarchy (see even_mode_expand).
struct EvenFock {
    int n = 1;
};

using StateSpec = std::variant<FockSuperposition, EvenFock, CoherentPair>;

// Total photon number for Fock inputs, -1 for coherent.
int total_photons(const StateSpec& state);
std::string describe(const StateSpec& state);

struct PlanOverrides {
    std::optional<Method> method;
    std::optional<double> abs_tol;
    std::optional<double> rel_tol;
    std::optional<double> fixed_dt;
    std::optional<double> max_step;
    std::optional<double> tail;        // free-decay window after the pulse, 1/gamma0
    std::optional<int> sample_stride;
};

// A complete simulation problem: initial field state, one envelope per
// spatial mode, decay rates and integration overrides.
struct Problem {
    StateSpec state;
    PulseEnvelope env_r;
    PulseEnvelope env_l;
    SystemParams params;
    PlanOverrides overrides;

    Problem with_bandwidth(double omega) const;   // both envelopes
    void validate() const;
};

// Plan derived from the envelopes: starts at the earliest support point,
// breaks at every envelope discontinuity, and ends an analytic decay tail
// after the latest support point. Tolerances default to 1e-9, relaxed to
// 1e-8 above 5 photons.
IntegrationPlan make_plan(const Problem& problem);

Trajectory simulate(const Problem& problem);

// Independent even-mode representations used for cross-validation.
Trajectory simulate_even_mode_effective(int n, const PulseEnvelope& env,
                                        const SystemParams& params,
                                        const PlanOverrides& overrides = {});
Trajectory simulate_coherent_single_mode(double nbar, const PulseEnvelope& env,
                                         const SystemParams& params,
                                         const PlanOverrides& overrides = {});

}  // namespace atompulse
