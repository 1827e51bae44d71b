#pragma once

#include <utility>
#include <vector>

#include "atompulse/defs.hpp"
#include "atompulse/errors.hpp"

namespace atompulse {

// Occupation pair (n_r, n_l) of the two spatial modes.
struct ModePair {
    int n_r = 0;
    int n_l = 0;
    int total() const { return n_r + n_l; }
    friend bool operator==(const ModePair&, const ModePair&) = default;
};

// Superposition of two-mode Fock states with a fixed total photon number.
// Mixed-total superpositions are not representable by design.
struct FockSuperposition {
    int total_photons = 0;
    std::vector<std::pair<ModePair, cplx>> coefficients;

    // Throws ConfigError unless all occupations share the total, keys are
    // unique and sum |c|^2 = 1 within 1e-12.
    void validate() const;
};

// Basis state |n_r, n_l>.
FockSuperposition fock_basis_state(int n_r, int n_l);

// Expansion of the n-photon even-parity mode state into two-mode Fock
// states: coefficient on (k, n-k) is sqrt(binom(n,k) / 2^n).
FockSuperposition even_mode_expand(int n);

// Same with alternating signs on the left-mode occupation; decoupled from
// the atom, handy as a null test.
FockSuperposition odd_mode_expand(int n);

}  // namespace atompulse
