#pragma once

#include "atompulse/integrate.hpp"
#include "atompulse/problem.hpp"

namespace atompulse {

// Peak excitation probability for one photon in a rising-exponential pulse,
// 4 gamma_eff Omega / (gamma0 + Omega)^2: closed-form solution of the
// two linear single-photon equations (Y integrates the envelope against the
// gamma0/2 relaxation kernel, X integrates |Y xi|; the peak sits at the end
// of the pulse). gamma_eff is gamma_r for a single spatial mode or
// gamma_even() for the even-parity mode.
double analytic_single_photon_pmax(double omega, double gamma_eff,
                                   double gamma0);

// Brute-force time-bin collision model. The field is chopped into bins of
// width time_step; each bin interacts unitarily with the atom through
// exp(sum_j sqrt(gamma_j dt) (b_j^dag sigma_- - sigma_+ b_j)). Fock inputs
// (total photons <= 2) evolve as a state vector in the conserved-excitation
// sector; coherent inputs (nbar <= 4) evolve the atomic density matrix with
// per-bin truncated coherent states. First-order accurate in time_step.
struct CollisionModelConfig {
    double time_step = 0.01;        // gamma0 * dt; keep <= 0.02
    double extra_decay_time = 3.0;  // window past the pulse, 1/gamma0
    int coherent_bin_dim = 4;       // per-bin oscillator truncation

    void validate() const;
};

struct CollisionResult {
    Trajectory trajectory;   // P at bin boundaries
    double norm_drift = 0.0; // | ||state|| - 1 | or | tr(rho) - 1 | at the end
    std::size_t bins = 0;
};

CollisionResult collision_model_pt(const CollisionModelConfig& config,
                                   const SystemParams& params,
                                   const PulseEnvelope& env_r,
                                   const PulseEnvelope& env_l,
                                   const StateSpec& input);

}  // namespace atompulse
