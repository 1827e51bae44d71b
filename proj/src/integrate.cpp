#include "atompulse/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace atompulse {

const char* to_string(Method m) {
    return m == Method::RK4Fixed ? "rk4" : "rk45";
}

void IntegrationPlan::validate() const {
    if (!(t_end >= t_start)) {
        throw ConfigError("integration: t_end must not precede t_start");
    }
    if (!(drive_end >= t_start) || !(drive_end <= t_end)) {
        throw ConfigError("integration: drive_end outside [t_start, t_end]");
    }
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
        throw ConfigError("integration.abs_tol/rel_tol must be positive");
    }
    if (!(fixed_dt > 0.0)) {
        throw ConfigError("integration.dt must be positive");
    }
    if (!(max_step > 0.0)) {
        throw ConfigError("integration.max_step must be positive");
    }
    if (sample_stride < 1) {
        throw ConfigError("integration.sample_stride must be >= 1");
    }
    for (double b : breakpoints) {
        if (b < t_start || b > t_end) {
            throw ConfigError("integration: breakpoint outside [t_start, t_end]");
        }
    }
    if (!std::is_sorted(breakpoints.begin(), breakpoints.end())) {
        throw ConfigError("integration: breakpoints must be sorted");
    }
}

namespace {

void check_finite(const VecC& y, double t) {
    for (const cplx& v : y) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw NumericalError("non-finite state at t = " + std::to_string(t));
        }
    }
}

struct Recorder {
    Trajectory traj;
    const OdeSystem& sys;
    int stride;
    long accepted = 0;
    bool have_any = false;

    Recorder(const OdeSystem& s, int stride_) : sys(s), stride(stride_) {}

    // Every accepted step feeds the running maximum; only every stride-th
    // step (plus forced nodes) lands in the sampled output.
    void accept(double t, const VecC& y, bool force) {
        const double p = sys.observable(t, y);
        if (!have_any || p > traj.p_max) {
            traj.p_max = p;
            traj.t_at_max = t;
        }
        have_any = true;
        const bool sampled = force || (accepted % stride == 0);
        ++accepted;
        if (sampled) {
            if (!traj.times.empty() && traj.times.back() == t) return;
            traj.times.push_back(t);
            traj.p_values.push_back(p);
            if (sys.monitor) sys.monitor(t, y);
        }
    }
};

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695,
                 e4 = b4 - 393.0 / 640, e5 = b5 + 92097.0 / 339200,
                 e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

class Stepper {
  public:
    explicit Stepper(std::size_t dim)
        : k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim),
          tmp(dim), ynew(dim) {}

    void rk4_step(const OdeSystem& sys, double t, double h, VecC& y) {
        const std::size_t dim = y.size();
        sys.rhs(t, y, k1);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        sys.rhs(t + 0.5 * h, tmp, k2);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        sys.rhs(t + 0.5 * h, tmp, k3);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + h * k3[i];
        sys.rhs(t + h, tmp, k4);
        for (std::size_t i = 0; i < dim; ++i) {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }

    // Returns the scaled error; fills ynew.
    double rk45_step(const OdeSystem& sys, double t, double h, const VecC& y,
                     double abs_tol, double rel_tol) {
        const std::size_t dim = y.size();
        sys.rhs(t, y, k1);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + h * a21 * k1[i];
        sys.rhs(t + c2 * h, tmp, k2);
        for (std::size_t i = 0; i < dim; ++i)
            tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        sys.rhs(t + c3 * h, tmp, k3);
        for (std::size_t i = 0; i < dim; ++i)
            tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        sys.rhs(t + c4 * h, tmp, k4);
        for (std::size_t i = 0; i < dim; ++i)
            tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] +
                                 a54 * k4[i]);
        sys.rhs(t + c5 * h, tmp, k5);
        for (std::size_t i = 0; i < dim; ++i)
            tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                                 a64 * k4[i] + a65 * k5[i]);
        sys.rhs(t + h, tmp, k6);
        for (std::size_t i = 0; i < dim; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                                  b5 * k5[i] + b6 * k6[i]);
        sys.rhs(t + h, ynew, k7);

        double err2 = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const cplx e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                                e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double scale =
                abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            const double r = std::abs(e) / scale;
            err2 += r * r;
        }
        return std::sqrt(err2 / static_cast<double>(dim));
    }

    VecC k1, k2, k3, k4, k5, k6, k7, tmp, ynew;
};

}  // namespace

Trajectory integrate(const OdeSystem& sys, VecC& y, const IntegrationPlan& plan) {
    plan.validate();
    if (!sys.rhs || !sys.observable) {
        throw ConfigError("integrate: rhs and observable are required");
    }

    const double node_eps = 1e-12 * std::max(1.0, std::abs(plan.t_start) +
                                                       std::abs(plan.t_end));
    const double numeric_end = sys.free_decay ? plan.drive_end : plan.t_end;

    std::vector<double> nodes;
    nodes.push_back(plan.t_start);
    for (double b : plan.breakpoints) {
        if (b > nodes.back() + node_eps && b < numeric_end - node_eps) {
            nodes.push_back(b);
        }
    }
    if (numeric_end > nodes.back() + node_eps) {
        nodes.push_back(numeric_end);
    }

    Recorder rec(sys, plan.sample_stride);
    rec.accept(plan.t_start, y, true);

    Stepper stepper(y.size());
    for (std::size_t seg = 0; seg + 1 < nodes.size(); ++seg) {
        const double a = nodes[seg];
        const double b = nodes[seg + 1];
        if (sys.set_segment) sys.set_segment(a, b);

        if (plan.method == Method::RK4Fixed) {
            const long n = std::max<long>(
                1, static_cast<long>(std::ceil((b - a) / plan.fixed_dt - 1e-12)));
            const double h = (b - a) / static_cast<double>(n);
            for (long i = 0; i < n; ++i) {
                const double t = a + h * static_cast<double>(i);
                stepper.rk4_step(sys, t, h, y);
                check_finite(y, t + h);
                const double t_next = (i + 1 == n) ? b : a + h * (i + 1);
                rec.accept(t_next, y, i + 1 == n);
            }
        } else {
            double t = a;
            double h = std::min(plan.max_step, b - a);
            while (t < b - node_eps) {
                h = std::min(h, b - t);
                if (h < 1e-14 * std::max(1.0, std::abs(t))) {
                    throw NumericalError("step size underflow at t = " +
                                         std::to_string(t));
                }
                const double err =
                    stepper.rk45_step(sys, t, h, y, plan.abs_tol, plan.rel_tol);
                if (!std::isfinite(err)) {
                    throw NumericalError("non-finite error estimate at t = " +
                                         std::to_string(t));
                }
                if (err <= 1.0) {
                    t = (b - t - h <= node_eps) ? b : t + h;
                    y = stepper.ynew;
                    check_finite(y, t);
                    rec.accept(t, y, t == b);
                    const double grow =
                        err == 0.0 ? 5.0
                                   : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
                    h = std::min(h * grow, plan.max_step);
                } else {
                    h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
                }
            }
        }
    }

    // Analytic free decay past the last drive point: the observable only
    // contracts there, so the sampling is for output, not for the maximum.
    if (sys.free_decay && plan.t_end > numeric_end + node_eps) {
        const double tail = plan.t_end - numeric_end;
        const long n = std::clamp<long>(static_cast<long>(std::ceil(tail / 0.01)),
                                        8, 400);
        const double dt = tail / static_cast<double>(n);
        for (long i = 1; i <= n; ++i) {
            sys.free_decay(y, dt);
            const double t = (i == n) ? plan.t_end : numeric_end + dt * i;
            rec.accept(t, y, true);
        }
    }

    return std::move(rec.traj);
}

}  // namespace atompulse
