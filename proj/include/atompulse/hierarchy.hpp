#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "atompulse/defs.hpp"
#include "atompulse/envelope.hpp"
#include "atompulse/fock.hpp"
#include "atompulse/params.hpp"

namespace atompulse {

// Index registry for the closed ODE system of atomic-operator matrix
// elements between two-mode Fock states. Three sectors:
//
//   X = <bra| sigma_z |ket>   bra and ket totals equal (levels 0..N)
//   Y = <bra| sigma_- |ket>   bra total one photon short of the ket
//   Z = <bra| sigma_+ |ket>   ket total one photon short of the bra
//
// Subscripts are bra-first: x_index(m_r, m_l, n_r, n_l) locates
// <m_r, m_l| sigma_z |n_r, n_l>. Offsets are a bijection onto
// [0, state_length()).
class HierarchyLayout {
  public:
    static constexpr int kDefaultMaxPhotons = 12;

    explicit HierarchyLayout(int total_photons,
                             int max_photons = kDefaultMaxPhotons);

    int total_photons() const { return n_; }
    std::size_t state_length() const { return length_; }
    std::size_t x_count() const;
    std::size_t y_count() const;
    std::size_t z_count() const;

    std::size_t x_index(int m_r, int m_l, int n_r, int n_l) const;
    std::size_t y_index(int m_r, int m_l, int n_r, int n_l) const;
    std::size_t z_index(int m_r, int m_l, int n_r, int n_l) const;

  private:
    int n_;
    std::size_t length_;
    std::vector<std::size_t> base_x_, base_y_, base_z_;
};

// Packed state with X = -delta_{bra,ket}, Y = Z = 0 (atom in the ground
// state before the pulse arrives).
VecC initial_hierarchy_state(const HierarchyLayout& layout);

// Single derivative evaluation with envelope drive amplitudes passed in
// directly (xi_r, xi_l already include any envelope phase).
void hierarchy_rhs_core(const HierarchyLayout& layout, const SystemParams& params,
                        cplx xi_r, cplx xi_l, std::span<const cplx> state,
                        std::span<cplx> deriv);

// Convenience wrapper evaluating the envelopes at t with their global
// (support-cutoff) semantics.
void hierarchy_rhs(const HierarchyLayout& layout, const SystemParams& params,
                   const PulseEnvelope& env_r, const PulseEnvelope& env_l,
                   double t, std::span<const cplx> state, std::span<cplx> deriv);

// P = (1 + sum_{m,n} conj(c_m) c_n X_{m,n}) / 2 over the top-level sector.
// Throws NumericalError if the imaginary residue exceeds 1e-9.
double excitation_probability(const HierarchyLayout& layout,
                              const FockSuperposition& superposition,
                              std::span<const cplx> state);

// max over |Z_{m,n} - conj(Y_{n,m})| and |X_{m,n} - conj(X_{n,m})|.
double hermiticity_defect(const HierarchyLayout& layout,
                          std::span<const cplx> state);

// Two-mode hierarchy bound to a parameter set and a pair of envelopes,
// with the piecewise-integration hooks (segment-aware envelope branches,
// analytic free decay).
class HierarchySystem {
  public:
    HierarchySystem(const HierarchyLayout& layout, const SystemParams& params,
                    const PulseEnvelope& env_r, const PulseEnvelope& env_l);

    const HierarchyLayout& layout() const { return layout_; }

    void set_segment(double a, double b);
    void rhs(double t, const VecC& y, VecC& dy) const;

    // Exact evolution with both drives off: diagonal X relaxes to -1 at rate
    // gamma0, everything else contracts (gamma0 for X, gamma0/2 for Y, Z).
    void free_decay(VecC& y, double dt) const;

    VecC initial_state() const { return initial_hierarchy_state(layout_); }
    double drive_peak() const;

  private:
    HierarchyLayout layout_;
    SystemParams params_;
    PulseEnvelope env_r_, env_l_;
    bool seg_r_active_ = true;
    bool seg_l_active_ = true;
};

// Single-mode reduction for n photons in the even-parity mode: only the
// even mode couples, with rate gamma_even(). State layout:
// [X_0..X_N, Y_1..Y_N, Z_1..Z_N] where X_T = <T|sigma_z|T>,
// Y_T = <T-1|sigma_-|T>, Z_T = <T|sigma_+|T-1>. Used as an independent
// representation for cross-validating the two-mode expansion.
class SingleModeSystem {
  public:
    SingleModeSystem(int photons, const SystemParams& params,
                     const PulseEnvelope& env);

    int photons() const { return n_; }
    std::size_t state_length() const { return 3 * static_cast<std::size_t>(n_) + 1; }

    void set_segment(double a, double b);
    void rhs(double t, const VecC& y, VecC& dy) const;
    void free_decay(VecC& y, double dt) const;
    VecC initial_state() const;
    double excitation_probability(const VecC& y) const;
    double drive_peak() const;

  private:
    int n_;
    double gamma0_;
    double gamma_eff_;
    PulseEnvelope env_;
    bool seg_active_ = true;
};

}  // namespace atompulse
