#include "atompulse/envelope.hpp"

#include <cmath>
#include <string>

namespace atompulse {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Smallest x with erfc(x) <= eps, by bisection; erfc is monotone.
double erfc_inverse(double eps) {
    double lo = 0.0, hi = 40.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (std::erfc(mid) > eps) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a,
                     double fa, double b, double fb, double fm, double whole,
                     double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return adaptive_step(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_step(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double tol) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = simpson(a, fa, b, fb, fm);
    return adaptive_step(f, a, fa, b, fb, fm, whole, tol, 40);
}

const char* to_string(PulseShape shape) {
    switch (shape) {
        case PulseShape::Rectangular: return "rectangular";
        case PulseShape::RisingExponential: return "rising-exponential";
        case PulseShape::Gaussian: return "gaussian";
    }
    return "?";
}

PulseShape parse_pulse_shape(const std::string& name) {
    if (name == "rectangular") return PulseShape::Rectangular;
    if (name == "rising-exponential") return PulseShape::RisingExponential;
    if (name == "gaussian") return PulseShape::Gaussian;
    throw ConfigError("envelope.kind: unknown pulse shape '" + name + "'");
}

PulseEnvelope::PulseEnvelope(PulseShape kind, double bandwidth,
                             double envelope_phase, double truncation_epsilon)
    : kind_(kind), bandwidth_(bandwidth), phase_(envelope_phase),
      eps_(truncation_epsilon) {
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
        throw ConfigError("envelope.bandwidth must be positive (got " +
                          std::to_string(bandwidth) + ")");
    }
    if (!(eps_ > 0.0) || eps_ > 1e-2) {
        throw ConfigError("envelope.epsilon must be in (0, 1e-2]");
    }
    switch (kind_) {
        case PulseShape::Rectangular:
            t_lo_ = -2.0 / bandwidth_;
            t_hi_ = 0.0;
            break;
        case PulseShape::RisingExponential:
            // tail mass below t is exp(Omega t)
            t_lo_ = std::log(eps_) / bandwidth_;
            t_hi_ = 0.0;
            break;
        case PulseShape::Gaussian: {
            // |xi|^2 has std 1/(2 Omega); two-sided tail mass beyond +-T is
            // erfc(sqrt(2) Omega T)
            const double half_width = erfc_inverse(eps_) / (std::sqrt(2.0) * bandwidth_);
            t_lo_ = -half_width;
            t_hi_ = half_width;
            break;
        }
    }
}

cplx PulseEnvelope::branch(double t) const {
    const cplx phase = std::polar(1.0, phase_);
    switch (kind_) {
        case PulseShape::Rectangular:
            return std::sqrt(0.5 * bandwidth_) * phase;
        case PulseShape::RisingExponential:
            return std::sqrt(bandwidth_) * std::exp(0.5 * bandwidth_ * t) * phase;
        case PulseShape::Gaussian:
            return std::pow(2.0 * bandwidth_ * bandwidth_ / kPi, 0.25) *
                   std::exp(-bandwidth_ * bandwidth_ * t * t) * phase;
    }
    return {};
}

cplx PulseEnvelope::evaluate(double t) const {
    // Support closure follows the shape definitions: the rectangle includes
    // both edges, the rising exponential stops strictly before t = 0.
    if (kind_ == PulseShape::RisingExponential) {
        if (t < t_lo_ || t >= 0.0) return {};
    } else {
        if (t < t_lo_ || t > t_hi_) return {};
    }
    return branch(t);
}

std::vector<double> PulseEnvelope::breakpoints() const {
    return {t_lo_, t_hi_};
}

double PulseEnvelope::max_abs() const {
    switch (kind_) {
        case PulseShape::Rectangular: return std::sqrt(0.5 * bandwidth_);
        case PulseShape::RisingExponential: return std::sqrt(bandwidth_);
        case PulseShape::Gaussian:
            return std::pow(2.0 * bandwidth_ * bandwidth_ / kPi, 0.25);
    }
    return 0.0;
}

bool PulseEnvelope::same_shape(const PulseEnvelope& other) const {
    return kind_ == other.kind_ && bandwidth_ == other.bandwidth_ &&
           phase_ == other.phase_ && eps_ == other.eps_;
}

double norm_check(const PulseEnvelope& env) {
    const auto [a, b] = env.support();
    const double mass = integrate_adaptive(
        [&](double t) { return std::norm(env.branch(t)); }, a, b, 1e-13);
    return std::abs(mass - 1.0);
}

}  // namespace atompulse
