#pragma once

#include <optional>
#include <vector>

#include "sire/control.hpp"
#include "sire/model.hpp"

namespace sire {

struct IntegratorConfig {
    double step = 1e-3;       // maximum RK4 step; steps align on control jumps
    double event_tol = 1e-10; // |i - mu| tolerance when locating threshold events
    double max_horizon = 0.0; // 0 resolves to 10 * (x+y)/(mu*gamma)

    void validate() const;
    double resolved_horizon(const ModelParams& p, const State& x0) const;
};

// Dense RK4 output.  Samples sit on the integrator's step grid, so every
// control discontinuity coincides with a sample time.
struct Trajectory {
    std::vector<double> times;
    std::vector<State> states;
    std::vector<double> control_values; // r(times[k]), literal evaluation
    std::vector<double> recovered;      // gamma * integral of i, third RK4 component

    ModelParams params;
    ControlLaw control;

    std::size_t size() const { return times.size(); }

    // Cubic Hermite evaluation between samples; x must lie within the span
    // (a slack of a few ulps is tolerated at the ends).
    State interpolate(double t) const;
};

// Controlled vector field; validates state and r in [0,1].
State vector_field(const ModelParams& p, const State& x, double r);

// First integral of the uncontrolled flow: i + s - (gamma/beta) ln s.
double sir_invariant(const ModelParams& p, const State& x);

Trajectory integrate(const ModelParams& p, const ControlLaw& c, const State& x0,
                     double t_end, const IntegratorConfig& cfg = {});

// First t with |i(t) - mu| <= event_tol, localized by bisection inside the
// bracketing RK4 step.  Starting exactly on the threshold: resolves to 0 when
// beta*s <= gamma, otherwise waits for the excursion to return (and sets
// *degenerate_start).  Returns nullopt when the horizon is exhausted.
std::optional<double> first_threshold_crossing(const ModelParams& p, const ControlLaw& c,
                                               const State& x0, const IntegratorConfig& cfg = {},
                                               bool* degenerate_start = nullptr);

} // namespace sire
