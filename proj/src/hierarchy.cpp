#include "atompulse/hierarchy.hpp"

#include <cassert>
#include <cmath>
#include <string>

namespace atompulse {

// Sector shapes per level T (level = ket total photon number):
//   X: bra and ket totals both T, (T+1)^2 elements, T = 0..N
//   Y: bra total T-1, ket total T, T(T+1) elements, T = 1..N
//   Z: bra total T, ket total T-1, mirror of Y
// Within a level the r-mode occupations (m_r, n_r) enumerate the block in
// row-major bra-first order; the l-mode occupations follow from the totals.
HierarchyLayout::HierarchyLayout(int total_photons, int max_photons)
    : n_(total_photons) {
    if (total_photons < 0) {
        throw ConfigError("total photon number must be nonnegative");
    }
    if (total_photons > max_photons) {
        throw CapacityError("total photon number " +
                            std::to_string(total_photons) +
                            " exceeds the capacity limit " +
                            std::to_string(max_photons));
    }
    base_x_.resize(n_ + 1);
    base_y_.resize(n_ + 1);
    base_z_.resize(n_ + 1);
    std::size_t offset = 0;
    for (int t = 0; t <= n_; ++t) {
        base_x_[t] = offset;
        offset += static_cast<std::size_t>(t + 1) * (t + 1);
    }
    for (int t = 1; t <= n_; ++t) {
        base_y_[t] = offset;
        offset += static_cast<std::size_t>(t) * (t + 1);
    }
    for (int t = 1; t <= n_; ++t) {
        base_z_[t] = offset;
        offset += static_cast<std::size_t>(t) * (t + 1);
    }
    length_ = offset;
}

std::size_t HierarchyLayout::x_count() const {
    return base_y_.empty() ? length_ : (n_ >= 1 ? base_y_[1] : length_);
}

std::size_t HierarchyLayout::y_count() const {
    return n_ >= 1 ? base_z_[1] - base_y_[1] : 0;
}

std::size_t HierarchyLayout::z_count() const {
    return n_ >= 1 ? length_ - base_z_[1] : 0;
}

std::size_t HierarchyLayout::x_index(int m_r, int m_l, int n_r,
                                     [[maybe_unused]] int n_l) const {
    const int t = m_r + m_l;
    assert(t == n_r + n_l && t <= n_ && m_r >= 0 && m_l >= 0 && n_r >= 0 &&
           n_l >= 0);
    return base_x_[t] + static_cast<std::size_t>(m_r) * (t + 1) + n_r;
}

std::size_t HierarchyLayout::y_index(int m_r, [[maybe_unused]] int m_l, int n_r,
                                     int n_l) const {
    const int t = n_r + n_l;
    assert(m_r + m_l == t - 1 && t >= 1 && t <= n_ && m_r >= 0 && m_l >= 0 &&
           n_r >= 0 && n_l >= 0);
    return base_y_[t] + static_cast<std::size_t>(m_r) * (t + 1) + n_r;
}

std::size_t HierarchyLayout::z_index(int m_r, int m_l, int n_r,
                                     [[maybe_unused]] int n_l) const {
    const int t = m_r + m_l;
    assert(n_r + n_l == t - 1 && t >= 1 && t <= n_ && m_r >= 0 && m_l >= 0 &&
           n_r >= 0 && n_l >= 0);
    return base_z_[t] + static_cast<std::size_t>(m_r) * t + n_r;
}

VecC initial_hierarchy_state(const HierarchyLayout& layout) {
    VecC state(layout.state_length(), cplx(0.0, 0.0));
    for (int t = 0; t <= layout.total_photons(); ++t) {
        for (int m_r = 0; m_r <= t; ++m_r) {
            state[layout.x_index(m_r, t - m_r, m_r, t - m_r)] = cplx(-1.0, 0.0);
        }
    }
    return state;
}

void hierarchy_rhs_core(const HierarchyLayout& layout, const SystemParams& params,
                        cplx xi_r, cplx xi_l, std::span<const cplx> state,
                        std::span<cplx> deriv) {
    if (state.size() != layout.state_length() ||
        deriv.size() != layout.state_length()) {
        throw ConfigError("hierarchy state length does not match the layout");
    }
    const int n = layout.total_photons();
    const double g0 = params.gamma0();
    const double sqrt_gr = std::sqrt(params.gamma_r);
    const double sqrt_gl = std::sqrt(params.gamma_l);
    const cplx xi_r_c = std::conj(xi_r);
    const cplx xi_l_c = std::conj(xi_l);

    // X sector. The ground element X_{00,00} reduces to -gamma0 (X + 1) and
    // stays pinned at its initial value -1.
    for (int t = 0; t <= n; ++t) {
        for (int m_r = 0; m_r <= t; ++m_r) {
            const int m_l = t - m_r;
            for (int n_r = 0; n_r <= t; ++n_r) {
                const int n_l = t - n_r;
                const std::size_t idx = layout.x_index(m_r, m_l, n_r, n_l);
                cplx d = -g0 * (state[idx] + (m_r == n_r ? 1.0 : 0.0));
                if (n_r >= 1) {
                    d -= 2.0 * sqrt_gr * std::sqrt(n_r) * xi_r *
                         state[layout.z_index(m_r, m_l, n_r - 1, n_l)];
                }
                if (n_l >= 1) {
                    d -= 2.0 * sqrt_gl * std::sqrt(n_l) * xi_l *
                         state[layout.z_index(m_r, m_l, n_r, n_l - 1)];
                }
                if (m_r >= 1) {
                    d -= 2.0 * sqrt_gr * std::sqrt(m_r) * xi_r_c *
                         state[layout.y_index(m_r - 1, m_l, n_r, n_l)];
                }
                if (m_l >= 1) {
                    d -= 2.0 * sqrt_gl * std::sqrt(m_l) * xi_l_c *
                         state[layout.y_index(m_r, m_l - 1, n_r, n_l)];
                }
                deriv[idx] = d;
            }
        }
    }
    // Y sector: bra one photon short, driven by X one level down.
    for (int t = 1; t <= n; ++t) {
        for (int m_r = 0; m_r <= t - 1; ++m_r) {
            const int m_l = t - 1 - m_r;
            for (int n_r = 0; n_r <= t; ++n_r) {
                const int n_l = t - n_r;
                const std::size_t idx = layout.y_index(m_r, m_l, n_r, n_l);
                cplx d = -0.5 * g0 * state[idx];
                if (n_r >= 1) {
                    d += sqrt_gr * std::sqrt(n_r) * xi_r *
                         state[layout.x_index(m_r, m_l, n_r - 1, n_l)];
                }
                if (n_l >= 1) {
                    d += sqrt_gl * std::sqrt(n_l) * xi_l *
                         state[layout.x_index(m_r, m_l, n_r, n_l - 1)];
                }
                deriv[idx] = d;
            }
        }
    }
    // Z sector: ket one photon short, conjugate envelopes on the bra side.
    for (int t = 1; t <= n; ++t) {
        for (int m_r = 0; m_r <= t; ++m_r) {
            const int m_l = t - m_r;
            for (int n_r = 0; n_r <= t - 1; ++n_r) {
                const int n_l = t - 1 - n_r;
                const std::size_t idx = layout.z_index(m_r, m_l, n_r, n_l);
                cplx d = -0.5 * g0 * state[idx];
                if (m_r >= 1) {
                    d += sqrt_gr * std::sqrt(m_r) * xi_r_c *
                         state[layout.x_index(m_r - 1, m_l, n_r, n_l)];
                }
                if (m_l >= 1) {
                    d += sqrt_gl * std::sqrt(m_l) * xi_l_c *
                         state[layout.x_index(m_r, m_l - 1, n_r, n_l)];
                }
                deriv[idx] = d;
            }
        }
    }
}

void hierarchy_rhs(const HierarchyLayout& layout, const SystemParams& params,
                   const PulseEnvelope& env_r, const PulseEnvelope& env_l,
                   double t, std::span<const cplx> state, std::span<cplx> deriv) {
    hierarchy_rhs_core(layout, params, env_r.evaluate(t), env_l.evaluate(t),
                       state, deriv);
}

double excitation_probability(const HierarchyLayout& layout,
                              const FockSuperposition& superposition,
                              std::span<const cplx> state) {
    if (superposition.total_photons != layout.total_photons()) {
        throw ConfigError("superposition photon number does not match layout");
    }
    cplx sz(0.0, 0.0);
    for (const auto& [bra, c_bra] : superposition.coefficients) {
        for (const auto& [ket, c_ket] : superposition.coefficients) {
            sz += std::conj(c_bra) * c_ket *
                  state[layout.x_index(bra.n_r, bra.n_l, ket.n_r, ket.n_l)];
        }
    }
    const double p = 0.5 * (1.0 + sz.real());
    if (std::abs(0.5 * sz.imag()) > 1e-9) {
        throw NumericalError("excitation probability has imaginary residue " +
                             std::to_string(0.5 * sz.imag()));
    }
    return p;
}

double hermiticity_defect(const HierarchyLayout& layout,
                          std::span<const cplx> state) {
    const int n = layout.total_photons();
    double defect = 0.0;
    for (int t = 0; t <= n; ++t) {
        for (int m_r = 0; m_r <= t; ++m_r) {
            for (int n_r = 0; n_r <= t; ++n_r) {
                const cplx a = state[layout.x_index(m_r, t - m_r, n_r, t - n_r)];
                const cplx b = state[layout.x_index(n_r, t - n_r, m_r, t - m_r)];
                defect = std::max(defect, std::abs(a - std::conj(b)));
            }
        }
    }
    for (int t = 1; t <= n; ++t) {
        for (int m_r = 0; m_r <= t; ++m_r) {
            for (int n_r = 0; n_r <= t - 1; ++n_r) {
                const cplx z = state[layout.z_index(m_r, t - m_r, n_r, t - 1 - n_r)];
                const cplx y = state[layout.y_index(n_r, t - 1 - n_r, m_r, t - m_r)];
                defect = std::max(defect, std::abs(z - std::conj(y)));
            }
        }
    }
    return defect;
}

HierarchySystem::HierarchySystem(const HierarchyLayout& layout,
                                 const SystemParams& params,
                                 const PulseEnvelope& env_r,
                                 const PulseEnvelope& env_l)
    : layout_(layout), params_(params), env_r_(env_r), env_l_(env_l) {
    params_.validate();
}

void HierarchySystem::set_segment(double a, double b) {
    const double mid = a + 0.5 * (b - a);
    seg_r_active_ = env_r_.in_support(mid);
    seg_l_active_ = env_l_.in_support(mid);
}

void HierarchySystem::rhs(double t, const VecC& y, VecC& dy) const {
    const cplx xi_r = seg_r_active_ ? env_r_.branch(t) : cplx(0.0, 0.0);
    const cplx xi_l = seg_l_active_ ? env_l_.branch(t) : cplx(0.0, 0.0);
    hierarchy_rhs_core(layout_, params_, xi_r, xi_l, y, dy);
}

void HierarchySystem::free_decay(VecC& y, double dt) const {
    const double f = std::exp(-params_.gamma0() * dt);
    const double h = std::exp(-0.5 * params_.gamma0() * dt);
    const int n = layout_.total_photons();
    for (int t = 0; t <= n; ++t) {
        for (int m_r = 0; m_r <= t; ++m_r) {
            for (int n_r = 0; n_r <= t; ++n_r) {
                const std::size_t idx =
                    layout_.x_index(m_r, t - m_r, n_r, t - n_r);
                if (m_r == n_r) {
                    y[idx] = -1.0 + (y[idx] + 1.0) * f;
                } else {
                    y[idx] *= f;
                }
            }
        }
    }
    for (std::size_t i = layout_.x_count(); i < layout_.state_length(); ++i) {
        y[i] *= h;
    }
}

double HierarchySystem::drive_peak() const {
    const double n = std::max(1, layout_.total_photons());
    return 2.0 * (std::sqrt(params_.gamma_r * n) * env_r_.max_abs() +
                  std::sqrt(params_.gamma_l * n) * env_l_.max_abs());
}

SingleModeSystem::SingleModeSystem(int photons, const SystemParams& params,
                                   const PulseEnvelope& env)
    : n_(photons), gamma0_(params.gamma0()), gamma_eff_(params.gamma_even()),
      env_(env) {
    params.validate();
    if (!params.symmetric()) {
        throw ConfigError(
            "params: even-mode reduction requires gamma_r == gamma_l");
    }
    if (photons < 0) {
        throw ConfigError("photon number must be nonnegative");
    }
    if (photons > HierarchyLayout::kDefaultMaxPhotons) {
        throw CapacityError("photon number exceeds the capacity limit");
    }
}

void SingleModeSystem::set_segment(double a, double b) {
    seg_active_ = env_.in_support(a + 0.5 * (b - a));
}

void SingleModeSystem::rhs(double t, const VecC& y, VecC& dy) const {
    const cplx xi = seg_active_ ? env_.branch(t) : cplx(0.0, 0.0);
    const cplx xi_c = std::conj(xi);
    const std::size_t nu = static_cast<std::size_t>(n_);
    dy[0] = -gamma0_ * (y[0] + 1.0);
    for (std::size_t t_lvl = 1; t_lvl <= nu; ++t_lvl) {
        const double g = std::sqrt(gamma_eff_ * static_cast<double>(t_lvl));
        const std::size_t x = t_lvl;
        const std::size_t yy = nu + t_lvl;          // Y_T
        const std::size_t zz = 2 * nu + t_lvl;      // Z_T
        dy[x] = -gamma0_ * (y[x] + 1.0) - 2.0 * g * (xi * y[zz] + xi_c * y[yy]);
        dy[yy] = -0.5 * gamma0_ * y[yy] + g * xi * y[t_lvl - 1];
        dy[zz] = -0.5 * gamma0_ * y[zz] + g * xi_c * y[t_lvl - 1];
    }
}

void SingleModeSystem::free_decay(VecC& y, double dt) const {
    const double f = std::exp(-gamma0_ * dt);
    const double h = std::exp(-0.5 * gamma0_ * dt);
    for (int t = 0; t <= n_; ++t) {
        y[t] = -1.0 + (y[t] + 1.0) * f;
    }
    for (std::size_t i = n_ + 1; i < state_length(); ++i) {
        y[i] *= h;
    }
}

VecC SingleModeSystem::initial_state() const {
    VecC y(state_length(), cplx(0.0, 0.0));
    for (int t = 0; t <= n_; ++t) {
        y[t] = cplx(-1.0, 0.0);
    }
    return y;
}

double SingleModeSystem::excitation_probability(const VecC& y) const {
    const cplx x = y[n_];
    if (std::abs(0.5 * x.imag()) > 1e-9) {
        throw NumericalError("excitation probability has imaginary residue");
    }
    return 0.5 * (1.0 + x.real());
}

double SingleModeSystem::drive_peak() const {
    return 2.0 * std::sqrt(gamma_eff_ * std::max(1, n_)) * env_.max_abs();
}

}  // namespace atompulse
