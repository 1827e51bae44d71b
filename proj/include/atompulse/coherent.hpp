#pragma once

#include "atompulse/defs.hpp"
#include "atompulse/envelope.hpp"
#include "atompulse/params.hpp"

namespace atompulse {

// Two-mode coherent drive: alpha_r = sqrt(nbar_r),
// alpha_l = sqrt(nbar_l) * exp(i*phi).
struct CoherentPair {
    double nbar_r = 0.0;
    double nbar_l = 0.0;
    double phi = 0.0;

    double nbar_total() const { return nbar_r + nbar_l; }
    void validate() const;
};

// Pair equivalent to a single even-mode coherent state of amplitude
// alpha_e: nbar_r = nbar_l = |alpha_e|^2 / 2, phi = 0. The global phase of
// alpha_e does not affect the atomic dynamics and is dropped.
CoherentPair even_mode_coherent_pair(cplx alpha_e);

// Closed three-variable dynamics for a coherent drive. State is the packed
// complex triple [X, Y, Z] (sigma_z, sigma_-, sigma_+ expectations) with
// X(t0) = -1, Y = Z = 0. The drive enters through
//   Lambda(t) = sqrt(gamma_r nbar_r) xi_r(t) + e^{i phi} sqrt(gamma_l nbar_l) xi_l(t)
// as dX = -gamma0 (X+1) - 2(conj(Lambda) Y + Lambda Z),
//    dY = -gamma0/2 Y + Lambda X,  dZ = -gamma0/2 Z + conj(Lambda) X.
class BlochSystem {
  public:
    BlochSystem(const SystemParams& params, const PulseEnvelope& env_r,
                const PulseEnvelope& env_l, const CoherentPair& pair);

    void set_segment(double a, double b);
    void rhs(double t, const VecC& y, VecC& dy) const;
    void free_decay(VecC& y, double dt) const;
    VecC initial_state() const { return {cplx(-1.0, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0)}; }

    // P = (1 + Re X)/2; throws NumericalError when |Im X| > 1e-9.
    double excitation_probability(const VecC& y) const;

    cplx drive(double t) const;   // Lambda(t), segment-aware
    double drive_peak() const;

  private:
    SystemParams params_;
    PulseEnvelope env_r_, env_l_;
    double amp_r_;
    cplx amp_l_;
    bool seg_r_active_ = true;
    bool seg_l_active_ = true;
};

void bloch_rhs_core(double gamma0, cplx lambda, const VecC& y, VecC& dy);

}  // namespace atompulse
