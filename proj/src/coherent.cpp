#include "atompulse/coherent.hpp"

#include <cmath>

namespace atompulse {

void CoherentPair::validate() const {
    if (nbar_r < 0.0 || nbar_l < 0.0) {
        throw ConfigError("state.nbar_*: mean photon numbers must be nonnegative");
    }
    if (!std::isfinite(phi)) {
        throw ConfigError("state.phi must be finite");
    }
}

CoherentPair even_mode_coherent_pair(cplx alpha_e) {
    const double nbar = 0.5 * std::norm(alpha_e);
    return CoherentPair{nbar, nbar, 0.0};
}

void bloch_rhs_core(double gamma0, cplx lambda, const VecC& y, VecC& dy) {
    const cplx lambda_c = std::conj(lambda);
    dy[0] = -gamma0 * (y[0] + 1.0) - 2.0 * (lambda_c * y[1] + lambda * y[2]);
    dy[1] = -0.5 * gamma0 * y[1] + lambda * y[0];
    dy[2] = -0.5 * gamma0 * y[2] + lambda_c * y[0];
}

BlochSystem::BlochSystem(const SystemParams& params, const PulseEnvelope& env_r,
                         const PulseEnvelope& env_l, const CoherentPair& pair)
    : params_(params), env_r_(env_r), env_l_(env_l) {
    params_.validate();
    pair.validate();
    amp_r_ = std::sqrt(params.gamma_r * pair.nbar_r);
    amp_l_ = std::polar(std::sqrt(params.gamma_l * pair.nbar_l), pair.phi);
}

void BlochSystem::set_segment(double a, double b) {
    const double mid = a + 0.5 * (b - a);
    seg_r_active_ = env_r_.in_support(mid);
    seg_l_active_ = env_l_.in_support(mid);
}

cplx BlochSystem::drive(double t) const {
    cplx lambda(0.0, 0.0);
    if (seg_r_active_) lambda += amp_r_ * env_r_.branch(t);
    if (seg_l_active_) lambda += amp_l_ * env_l_.branch(t);
    return lambda;
}

void BlochSystem::rhs(double t, const VecC& y, VecC& dy) const {
    bloch_rhs_core(params_.gamma0(), drive(t), y, dy);
}

void BlochSystem::free_decay(VecC& y, double dt) const {
    const double f = std::exp(-params_.gamma0() * dt);
    const double h = std::exp(-0.5 * params_.gamma0() * dt);
    y[0] = -1.0 + (y[0] + 1.0) * f;
    y[1] *= h;
    y[2] *= h;
}

double BlochSystem::excitation_probability(const VecC& y) const {
    if (std::abs(0.5 * y[0].imag()) > 1e-9) {
        throw NumericalError("excitation probability has imaginary residue");
    }
    return 0.5 * (1.0 + y[0].real());
}

double BlochSystem::drive_peak() const {
    return std::abs(amp_r_) * env_r_.max_abs() +
           std::abs(amp_l_) * env_l_.max_abs();
}

}  // namespace atompulse
