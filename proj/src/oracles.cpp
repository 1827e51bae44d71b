#include "atompulse/oracles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>

#include "atompulse/fock.hpp"

namespace atompulse {

double analytic_single_photon_pmax(double omega, double gamma_eff,
                                   double gamma0) {
    const double s = gamma0 + omega;
    return 4.0 * gamma_eff * omega / (s * s);
}

void CollisionModelConfig::validate() const {
    if (!(time_step > 0.0)) {
        throw ConfigError("collision.time_step must be positive");
    }
    if (!(extra_decay_time >= 0.0)) {
        throw ConfigError("collision.extra_decay_time must be nonnegative");
    }
    if (coherent_bin_dim < 2 || coherent_bin_dim > 8) {
        throw ConfigError("collision.coherent_bin_dim must be in [2, 8]");
    }
}

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

// exp(G) for anti-Hermitian G via the Hermitian eigendecomposition of iG;
// exactly unitary up to rounding, which keeps the per-bin collisions norm
// conserving.
MatrixXcd expm_antihermitian(const MatrixXcd& g) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(cplx(0.0, 1.0) * g);
    VectorXcd phases(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < phases.size(); ++i) {
        phases[i] = std::exp(cplx(0.0, -es.eigenvalues()[i]));
    }
    return es.eigenvectors() * phases.asDiagonal() *
           es.eigenvectors().adjoint();
}

using Occ = std::array<int, 3>;

std::vector<Occ> enumerate_occupations(int channels, int sum) {
    std::vector<Occ> occs;
    for (int n0 = 0; n0 <= sum; ++n0) {
        for (int n1 = 0; n1 + n0 <= sum; ++n1) {
            const int n2 = sum - n0 - n1;
            if (channels < 3 && n2 > 0) continue;
            if (channels < 2 && n1 > 0) continue;
            occs.push_back({n0, n1, n2});
        }
    }
    return occs;
}

// Basis of (atom, active-bin occupations) with atom + photons == budget.
struct MiniBasis {
    std::vector<std::pair<int, Occ>> states;

    int find(int atom, const Occ& occ) const {
        for (std::size_t i = 0; i < states.size(); ++i) {
            if (states[i].first == atom && states[i].second == occ) {
                return static_cast<int>(i);
            }
        }
        return -1;
    }
};

MiniBasis mini_basis(int channels, int budget) {
    MiniBasis basis;
    if (budget >= 1) {
        for (const Occ& occ : enumerate_occupations(channels, budget - 1)) {
            basis.states.push_back({1, occ});
        }
    }
    for (const Occ& occ : enumerate_occupations(channels, budget)) {
        basis.states.push_back({0, occ});
    }
    return basis;
}

// One-bin collision unitary exp(sum_c g_c (b_c^dag sigma_- - sigma_+ b_c))
// restricted to the fixed-excitation block.
MatrixXcd collision_block(const std::vector<double>& g, int budget) {
    const int channels = static_cast<int>(g.size());
    const MiniBasis basis = mini_basis(channels, budget);
    const int dim = static_cast<int>(basis.states.size());
    MatrixXcd gen = MatrixXcd::Zero(dim, dim);
    for (int src = 0; src < dim; ++src) {
        const auto& [atom, occ] = basis.states[src];
        for (int c = 0; c < channels; ++c) {
            if (atom == 1) {
                Occ raised = occ;
                raised[c] += 1;
                const int dst = basis.find(0, raised);
                if (dst >= 0) {
                    gen(dst, src) += g[c] * std::sqrt(static_cast<double>(raised[c]));
                }
            } else if (occ[c] >= 1) {
                Occ lowered = occ;
                lowered[c] -= 1;
                const int dst = basis.find(1, lowered);
                if (dst >= 0) {
                    gen(dst, src) -= g[c] * std::sqrt(static_cast<double>(occ[c]));
                }
            }
        }
    }
    return expm_antihermitian(gen);
}

struct BinGrid {
    double t0 = 0.0;
    double dt = 0.0;
    long bins = 0;
};

// Bin edges aligned with the end of the pulse support so the discontinuity
// never falls inside a bin.
BinGrid make_grid(const CollisionModelConfig& config, const SystemParams& params,
                  const PulseEnvelope& env_r, const PulseEnvelope& env_l) {
    if (config.time_step * params.gamma0() > 0.02 + 1e-12) {
        throw ConfigError("collision.time_step: gamma0*dt must stay <= 0.02");
    }
    BinGrid grid;
    grid.t0 = std::min(env_r.support().first, env_l.support().first);
    const double sup_end = std::max(env_r.support().second, env_l.support().second);
    const long n_sup = std::max<long>(
        1, static_cast<long>(std::ceil((sup_end - grid.t0) / config.time_step - 1e-9)));
    grid.dt = (sup_end - grid.t0) / static_cast<double>(n_sup);
    grid.bins = n_sup + static_cast<long>(
                            std::ceil(config.extra_decay_time / grid.dt - 1e-9));
    return grid;
}

std::size_t pair_index(std::size_t lo, std::size_t hi) {
    return hi * (hi + 1) / 2 + lo;
}

// Global index in the conserved-excitation sector for a mini state placed at
// the given active modes, optionally accompanied by one spectator photon.
std::size_t sector_index(int total, std::size_t modes, int atom, const Occ& occ,
                         const std::array<std::size_t, 3>& active, int channels,
                         long spectator) {
    std::array<std::size_t, 2> photons{};
    int count = 0;
    for (int c = 0; c < channels; ++c) {
        for (int i = 0; i < occ[c]; ++i) photons[count++] = active[c];
    }
    if (spectator >= 0) photons[count++] = static_cast<std::size_t>(spectator);

    if (total == 1) {
        return atom == 1 ? 0 : 1 + photons[0];
    }
    if (atom == 1) {
        return photons[0];
    }
    const auto [lo, hi] = std::minmax(photons[0], photons[1]);
    return modes + pair_index(lo, hi);
}

struct Channels {
    int count = 2;
    std::array<double, 3> gamma{};
};

Channels make_channels(const SystemParams& params) {
    Channels ch;
    ch.gamma = {params.gamma_r, params.gamma_l, params.gamma_env};
    ch.count = params.gamma_env > 0.0 ? 3 : 2;
    return ch;
}

// Discretized wavepacket weights per photon channel, unit norm.
std::vector<std::vector<cplx>> bin_weights(const BinGrid& grid,
                                           const PulseEnvelope& env_r,
                                           const PulseEnvelope& env_l) {
    std::vector<std::vector<cplx>> w(2, std::vector<cplx>(grid.bins));
    const PulseEnvelope* envs[2] = {&env_r, &env_l};
    for (int c = 0; c < 2; ++c) {
        double norm2 = 0.0;
        for (long k = 0; k < grid.bins; ++k) {
            const double mid = grid.t0 + grid.dt * (static_cast<double>(k) + 0.5);
            w[c][k] = envs[c]->evaluate(mid) * std::sqrt(grid.dt);
            norm2 += std::norm(w[c][k]);
        }
        if (norm2 > 0.0) {
            const double scale = 1.0 / std::sqrt(norm2);
            for (auto& v : w[c]) v *= scale;
        }
    }
    return w;
}

CollisionResult run_fock(const CollisionModelConfig& config,
                         const SystemParams& params, const PulseEnvelope& env_r,
                         const PulseEnvelope& env_l,
                         const FockSuperposition& input) {
    const int total = input.total_photons;
    if (total > 2) {
        throw CapacityError("collision model supports at most 2 photons");
    }

    const BinGrid grid = make_grid(config, params, env_r, env_l);
    const Channels ch = make_channels(params);
    const std::size_t modes = static_cast<std::size_t>(ch.count) * grid.bins;

    CollisionResult result;
    result.bins = grid.bins;
    Trajectory& traj = result.trajectory;

    if (total == 0) {
        for (long k = 0; k <= grid.bins; ++k) {
            traj.times.push_back(grid.t0 + grid.dt * k);
            traj.p_values.push_back(0.0);
        }
        traj.p_max = 0.0;
        traj.t_at_max = grid.t0;
        return result;
    }

    const auto w = bin_weights(grid, env_r, env_l);
    const std::size_t dim =
        total == 1 ? 1 + modes : modes + modes * (modes + 1) / 2;
    VecC amp(dim, cplx(0.0, 0.0));

    for (const auto& [occ, coeff] : input.coefficients) {
        if (total == 1) {
            const int c = occ.n_r == 1 ? 0 : 1;
            for (long k = 0; k < grid.bins; ++k) {
                amp[1 + static_cast<std::size_t>(c) * grid.bins + k] +=
                    coeff * w[c][k];
            }
        } else if (occ.n_r == 1 && occ.n_l == 1) {
            for (long kr = 0; kr < grid.bins; ++kr) {
                for (long kl = 0; kl < grid.bins; ++kl) {
                    const std::size_t mr = kr;
                    const std::size_t ml = grid.bins + kl;
                    amp[modes + pair_index(mr, ml)] += coeff * w[0][kr] * w[1][kl];
                }
            }
        } else {
            const int c = occ.n_r == 2 ? 0 : 1;
            const std::size_t base = static_cast<std::size_t>(c) * grid.bins;
            for (long k = 0; k < grid.bins; ++k) {
                amp[modes + pair_index(base + k, base + k)] +=
                    coeff * w[c][k] * w[c][k];
                for (long k2 = k + 1; k2 < grid.bins; ++k2) {
                    amp[modes + pair_index(base + k, base + k2)] +=
                        coeff * std::sqrt(2.0) * w[c][k] * w[c][k2];
                }
            }
        }
    }

    std::vector<double> g(ch.count);
    for (int c = 0; c < ch.count; ++c) {
        g[c] = std::sqrt(ch.gamma[c] * grid.dt);
    }
    const MiniBasis basis_top = mini_basis(ch.count, total);
    const MatrixXcd block_top = collision_block(g, total);
    const MiniBasis basis_spec = mini_basis(ch.count, 1);
    const MatrixXcd block_spec = total == 2 ? collision_block(g, 1) : MatrixXcd();

    auto excited_probability = [&]() {
        double p = 0.0;
        const std::size_t excited = total == 1 ? 1 : modes;
        for (std::size_t i = 0; i < excited; ++i) p += std::norm(amp[i]);
        return p;
    };

    auto apply_block = [&](const MiniBasis& basis, const MatrixXcd& u,
                           const std::array<std::size_t, 3>& active,
                           long spectator) {
        std::array<std::size_t, 16> slots{};
        std::array<cplx, 16> v{};
        const std::size_t n = basis.states.size();
        for (std::size_t i = 0; i < n; ++i) {
            slots[i] = sector_index(total, modes, basis.states[i].first,
                                    basis.states[i].second, active, ch.count,
                                    spectator);
            v[i] = amp[slots[i]];
        }
        for (std::size_t i = 0; i < n; ++i) {
            cplx acc(0.0, 0.0);
            for (std::size_t j = 0; j < n; ++j) acc += u(i, j) * v[j];
            amp[slots[i]] = acc;
        }
    };

    traj.times.push_back(grid.t0);
    traj.p_values.push_back(excited_probability());
    traj.p_max = traj.p_values.back();
    traj.t_at_max = grid.t0;

    for (long k = 0; k < grid.bins; ++k) {
        std::array<std::size_t, 3> active{};
        for (int c = 0; c < ch.count; ++c) {
            active[c] = static_cast<std::size_t>(c) * grid.bins + k;
        }
        apply_block(basis_top, block_top, active, -1);
        if (total == 2) {
            for (std::size_t m = 0; m < modes; ++m) {
                bool is_active = false;
                for (int c = 0; c < ch.count; ++c) is_active |= (m == active[c]);
                if (is_active) continue;
                apply_block(basis_spec, block_spec, active,
                            static_cast<long>(m));
            }
        }
        const double t = grid.t0 + grid.dt * (k + 1);
        const double p = excited_probability();
        traj.times.push_back(t);
        traj.p_values.push_back(p);
        if (p > traj.p_max) {
            traj.p_max = p;
            traj.t_at_max = t;
        }
    }

    double norm2 = 0.0;
    for (const cplx& a : amp) norm2 += std::norm(a);
    result.norm_drift = std::abs(std::sqrt(norm2) - 1.0);
    return result;
}

CollisionResult run_coherent(const CollisionModelConfig& config,
                             const SystemParams& params,
                             const PulseEnvelope& env_r,
                             const PulseEnvelope& env_l,
                             const CoherentPair& pair) {
    if (pair.nbar_total() > 4.0 + 1e-12) {
        throw CapacityError("collision model supports coherent nbar <= 4");
    }

    const BinGrid grid = make_grid(config, params, env_r, env_l);
    const Channels ch = make_channels(params);
    const int d_bin = config.coherent_bin_dim;
    const int d_env = ch.count == 3 ? 3 : 1;
    const int dim = 2 * d_bin * d_bin * d_env;

    const cplx alpha_r = std::sqrt(pair.nbar_r);
    const cplx alpha_l = std::polar(std::sqrt(pair.nbar_l), pair.phi);

    // Generator on atom x bin_r x bin_l (x bin_env); index layout
    // ((atom*d + nr)*d + nl)*d_env + ne.
    auto flat = [&](int atom, int nr, int nl, int ne) {
        return ((atom * d_bin + nr) * d_bin + nl) * d_env + ne;
    };
    const std::array<double, 3> g = {std::sqrt(ch.gamma[0] * grid.dt),
                                     std::sqrt(ch.gamma[1] * grid.dt),
                                     std::sqrt(ch.gamma[2] * grid.dt)};
    MatrixXcd gen = MatrixXcd::Zero(dim, dim);
    for (int atom = 0; atom < 2; ++atom) {
        for (int nr = 0; nr < d_bin; ++nr) {
            for (int nl = 0; nl < d_bin; ++nl) {
                for (int ne = 0; ne < d_env; ++ne) {
                    const int src = flat(atom, nr, nl, ne);
                    if (atom == 1) {
                        if (nr + 1 < d_bin)
                            gen(flat(0, nr + 1, nl, ne), src) += g[0] * std::sqrt(nr + 1.0);
                        if (nl + 1 < d_bin)
                            gen(flat(0, nr, nl + 1, ne), src) += g[1] * std::sqrt(nl + 1.0);
                        if (ch.count == 3 && ne + 1 < d_env)
                            gen(flat(0, nr, nl, ne + 1), src) += g[2] * std::sqrt(ne + 1.0);
                    } else {
                        if (nr >= 1)
                            gen(flat(1, nr - 1, nl, ne), src) -= g[0] * std::sqrt(1.0 * nr);
                        if (nl >= 1)
                            gen(flat(1, nr, nl - 1, ne), src) -= g[1] * std::sqrt(1.0 * nl);
                        if (ch.count == 3 && ne >= 1)
                            gen(flat(1, nr, nl, ne - 1), src) -= g[2] * std::sqrt(1.0 * ne);
                    }
                }
            }
        }
    }
    const MatrixXcd u = expm_antihermitian(gen);

    auto bin_state = [&](cplx alpha, const PulseEnvelope& env, double mid) {
        VectorXcd chi = VectorXcd::Zero(d_bin);
        const cplx a = alpha * env.evaluate(mid) * std::sqrt(grid.dt);
        cplx term(1.0, 0.0);
        double norm2 = 0.0;
        for (int n = 0; n < d_bin; ++n) {
            chi[n] = term;
            norm2 += std::norm(term);
            term *= a / std::sqrt(n + 1.0);
        }
        chi /= std::sqrt(norm2);
        return chi;
    };

    Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
    rho(0, 0) = 1.0;

    CollisionResult result;
    result.bins = grid.bins;
    Trajectory& traj = result.trajectory;
    traj.times.push_back(grid.t0);
    traj.p_values.push_back(0.0);
    traj.p_max = 0.0;
    traj.t_at_max = grid.t0;

    MatrixXcd full(dim, dim);
    for (long k = 0; k < grid.bins; ++k) {
        const double mid = grid.t0 + grid.dt * (static_cast<double>(k) + 0.5);
        const VectorXcd chi_r = bin_state(alpha_r, env_r, mid);
        const VectorXcd chi_l = bin_state(alpha_l, env_l, mid);
        for (int a = 0; a < 2; ++a) {
            for (int nr = 0; nr < d_bin; ++nr) {
                for (int nl = 0; nl < d_bin; ++nl) {
                    for (int ne = 0; ne < d_env; ++ne) {
                        const int row = flat(a, nr, nl, ne);
                        const cplx left = chi_r[nr] * chi_l[nl] * (ne == 0 ? 1.0 : 0.0);
                        for (int a2 = 0; a2 < 2; ++a2) {
                            for (int nr2 = 0; nr2 < d_bin; ++nr2) {
                                for (int nl2 = 0; nl2 < d_bin; ++nl2) {
                                    for (int ne2 = 0; ne2 < d_env; ++ne2) {
                                        full(row, flat(a2, nr2, nl2, ne2)) =
                                            rho(a, a2) * left *
                                            std::conj(chi_r[nr2] * chi_l[nl2]) *
                                            (ne2 == 0 ? 1.0 : 0.0);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        full = u * full * u.adjoint();
        rho.setZero();
        for (int a = 0; a < 2; ++a) {
            for (int a2 = 0; a2 < 2; ++a2) {
                cplx acc(0.0, 0.0);
                for (int nr = 0; nr < d_bin; ++nr) {
                    for (int nl = 0; nl < d_bin; ++nl) {
                        for (int ne = 0; ne < d_env; ++ne) {
                            acc += full(flat(a, nr, nl, ne), flat(a2, nr, nl, ne));
                        }
                    }
                }
                rho(a, a2) = acc;
            }
        }
        const double t = grid.t0 + grid.dt * (k + 1);
        const double p = rho(1, 1).real();
        traj.times.push_back(t);
        traj.p_values.push_back(p);
        if (p > traj.p_max) {
            traj.p_max = p;
            traj.t_at_max = t;
        }
    }

    result.norm_drift = std::abs(rho.trace().real() - 1.0);
    return result;
}

}  // namespace

CollisionResult collision_model_pt(const CollisionModelConfig& config,
                                   const SystemParams& params,
                                   const PulseEnvelope& env_r,
                                   const PulseEnvelope& env_l,
                                   const StateSpec& input) {
    config.validate();
    params.validate();

    if (const auto* pair = std::get_if<CoherentPair>(&input)) {
        pair->validate();
        return run_coherent(config, params, env_r, env_l, *pair);
    }
    FockSuperposition fock;
    if (const auto* even = std::get_if<EvenFock>(&input)) {
        fock = even_mode_expand(even->n);
    } else {
        fock = std::get<FockSuperposition>(input);
        fock.validate();
    }
    return run_fock(config, params, env_r, env_l, fock);
}

}  // namespace atompulse
