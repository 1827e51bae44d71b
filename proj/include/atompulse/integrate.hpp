#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "atompulse/defs.hpp"
#include "atompulse/errors.hpp"

namespace atompulse {

enum class Method { RK4Fixed, RK45Adaptive };

const char* to_string(Method m);

// Piecewise integration plan. Segments never step across a breakpoint;
// beyond drive_end the system's analytic free-decay map is applied instead
// of numeric stepping.
struct IntegrationPlan {
    double t_start = 0.0;
    double t_end = 0.0;
    double drive_end = 0.0;               // == t_end disables the analytic tail
    std::vector<double> breakpoints;      // sorted, within (t_start, t_end)
    Method method = Method::RK45Adaptive;
    double abs_tol = 1e-9;
    double rel_tol = 1e-9;
    double fixed_dt = 1e-3;               // RK4 step request
    double max_step = 0.05;
    int sample_stride = 1;

    void validate() const;
};

// Sampled observable curve with the running maximum tracked on every
// accepted internal step (maxima routinely fall between output samples).
struct Trajectory {
    std::vector<double> times;
    std::vector<double> p_values;
    double p_max = 0.0;
    double t_at_max = 0.0;
    std::vector<std::pair<std::string, std::string>> metadata;
};

// Callbacks binding a concrete system to the engine. rhs and observable are
// required; the rest are optional.
struct OdeSystem {
    std::function<void(double, const VecC&, VecC&)> rhs;
    std::function<double(double, const VecC&)> observable;
    std::function<void(VecC&, double)> free_decay;          // analytic tail map
    std::function<void(double, double)> set_segment;        // called per segment
    std::function<void(double, const VecC&)> monitor;       // consistency checks
};

// Integrates state (in-out) over the plan. Deterministic: identical inputs
// give bit-identical trajectories. Throws NumericalError on NaN or step-size
// underflow.
Trajectory integrate(const OdeSystem& system, VecC& state,
                     const IntegrationPlan& plan);

}  // namespace atompulse
