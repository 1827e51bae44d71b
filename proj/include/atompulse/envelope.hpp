#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "atompulse/defs.hpp"
#include "atompulse/errors.hpp"

namespace atompulse {

enum class PulseShape { Rectangular, RisingExponential, Gaussian };

const char* to_string(PulseShape shape);
PulseShape parse_pulse_shape(const std::string& name);

// Normalized temporal envelope xi(t) with bandwidth Omega and a constant
// phase factor exp(i*theta). All rates are in units of the total atomic
// decay rate gamma0 and times in 1/gamma0.
//
// Shapes:
//   rectangular         sqrt(Omega/2) on [-2/Omega, 0]
//   rising-exponential  sqrt(Omega) * exp(Omega*t/2) for t < 0
//   gaussian            (2 Omega^2/pi)^(1/4) * exp(-Omega^2 t^2), RMS
//                       spectral width Omega, centered at t = 0
//
// Infinite tails are truncated where the discarded |xi|^2 mass reaches
// truncation_epsilon; evaluate() is exactly zero outside support().
class PulseEnvelope {
  public:
    PulseEnvelope(PulseShape kind, double bandwidth, double envelope_phase = 0.0,
                  double truncation_epsilon = 1e-10);

    PulseShape kind() const { return kind_; }
    double bandwidth() const { return bandwidth_; }
    double envelope_phase() const { return phase_; }
    double truncation_epsilon() const { return eps_; }

    cplx evaluate(double t) const;

    // Truncated support [t_start, t_end]; exact for the finite shapes.
    std::pair<double, double> support() const { return {t_lo_, t_hi_}; }

    // The smooth shape formula without the support cutoff. Piecewise
    // integrators use this so that stage evaluations at a segment boundary
    // take the one-sided limit belonging to the segment, not the value on
    // the far side of the discontinuity.
    cplx branch(double t) const;

    bool in_support(double t) const { return t >= t_lo_ && t <= t_hi_; }

    // Discontinuity / kink locations, sorted ascending.
    std::vector<double> breakpoints() const;

    double max_abs() const;

    PulseEnvelope with_bandwidth(double bandwidth) const {
        return PulseEnvelope(kind_, bandwidth, phase_, eps_);
    }
    PulseEnvelope with_phase(double phase) const {
        return PulseEnvelope(kind_, bandwidth_, phase, eps_);
    }

    bool same_shape(const PulseEnvelope& other) const;

  private:
    PulseShape kind_;
    double bandwidth_;
    double phase_;
    double eps_;
    double t_lo_, t_hi_;
};

// |integral of |xi|^2 over the truncated support - 1|. Reports the residual,
// never throws.
double norm_check(const PulseEnvelope& env);

// Adaptive Simpson quadrature. Used for envelope norms and as an independent
// oracle in tests.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double tol = 1e-12);

}  // namespace atompulse
