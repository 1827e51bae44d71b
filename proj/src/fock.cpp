#include "atompulse/fock.hpp"

#include <cmath>
#include <set>
#include <string>

#include "atompulse/params.hpp"

namespace atompulse {

double SystemParams::gamma_even() const {
    const double s = std::sqrt(gamma_r) + std::sqrt(gamma_l);
    return 0.5 * s * s;
}

void SystemParams::validate() const {
    if (gamma_r < 0.0 || gamma_l < 0.0 || gamma_env < 0.0) {
        throw ConfigError("params.gamma_*: decay rates must be nonnegative");
    }
    if (!(gamma0() > 0.0)) {
        throw ConfigError("params: total decay rate gamma0 must be positive");
    }
}

void FockSuperposition::validate() const {
    if (total_photons < 0) {
        throw ConfigError("state.total_photons must be nonnegative");
    }
    if (coefficients.empty()) {
        throw ConfigError("state.coefficients must not be empty");
    }
    std::set<std::pair<int, int>> seen;
    double norm2 = 0.0;
    for (const auto& [occ, amp] : coefficients) {
        if (occ.n_r < 0 || occ.n_l < 0) {
            throw ConfigError("state.coefficients: negative occupation");
        }
        if (occ.total() != total_photons) {
            throw ConfigError(
                "state.coefficients: occupation (" + std::to_string(occ.n_r) +
                "," + std::to_string(occ.n_l) + ") does not match total " +
                std::to_string(total_photons) +
                " (mixed-total superpositions are unsupported)");
        }
        if (!seen.insert({occ.n_r, occ.n_l}).second) {
            throw ConfigError("state.coefficients: duplicate occupation key");
        }
        norm2 += std::norm(amp);
    }
    if (std::abs(norm2 - 1.0) > 1e-12) {
        throw ConfigError("state.coefficients: squared amplitudes sum to " +
                          std::to_string(norm2) + ", expected 1");
    }
}

FockSuperposition fock_basis_state(int n_r, int n_l) {
    FockSuperposition state;
    state.total_photons = n_r + n_l;
    state.coefficients = {{{n_r, n_l}, cplx(1.0, 0.0)}};
    state.validate();
    return state;
}

namespace {

double binomial(int n, int k) {
    double value = 1.0;
    for (int i = 1; i <= k; ++i) {
        value *= static_cast<double>(n - k + i) / static_cast<double>(i);
    }
    return value;
}

FockSuperposition parity_expand(int n, double sign) {
    if (n < 0) throw ConfigError("state.n must be nonnegative");
    FockSuperposition state;
    state.total_photons = n;
    state.coefficients.reserve(n + 1);
    for (int k = 0; k <= n; ++k) {
        const double c = std::sqrt(binomial(n, k) / std::pow(2.0, n));
        const double s = (sign < 0.0 && (n - k) % 2 == 1) ? -1.0 : 1.0;
        state.coefficients.push_back({{k, n - k}, cplx(s * c, 0.0)});
    }
    state.validate();
    return state;
}

}  // namespace

FockSuperposition even_mode_expand(int n) { return parity_expand(n, +1.0); }

FockSuperposition odd_mode_expand(int n) { return parity_expand(n, -1.0); }

}  // namespace atompulse
