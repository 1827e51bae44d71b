#pragma once

#include "atompulse/errors.hpp"

namespace atompulse {

// Decay rates of the atom: into the right / left propagating channel and
// into the environment. The total rate gamma0 = gamma_r + gamma_l + gamma_env
// sets the unit system; with the default symmetric split gamma0 = 1.
struct SystemParams {
    double gamma_r = 0.5;
    double gamma_l = 0.5;
    double gamma_env = 0.0;

    double gamma0() const { return gamma_r + gamma_l + gamma_env; }
    bool symmetric() const { return gamma_r == gamma_l; }

    // Coupling rate of the even-parity mode, (sqrt(gamma_r)+sqrt(gamma_l))^2/2.
    double gamma_even() const;

    void validate() const;
};

}  // namespace atompulse
