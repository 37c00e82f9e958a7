#pragma once

#include <vector>

#include "sire/dynamics.hpp"

namespace sire {

// 2x2 derivative of the time-t flow map with respect to the initial state,
// rows ordered (s-component, i-component).
struct Mat2 {
    double dxs = 1.0, dys = 0.0; // gradient of s(t)
    double dxi = 0.0, dyi = 1.0; // gradient of i(t)

    double det() const { return dxs * dyi - dys * dxi; }
};

// Flow together with its state sensitivities Z' = A(t) Z, Z(0) = identity,
// where A is the Jacobian of the controlled vector field along the path.
struct SensitivityPath {
    std::vector<double> times;
    std::vector<State> states;
    std::vector<Mat2> Z;
    std::vector<double> di_dt; // time derivative of the i-component per sample

    std::size_t size() const { return times.size(); }
};

struct EradicationGradient {
    double u = 0.0;
    double du_dx = 0.0;
    double du_dy = 0.0;
    bool boundary_formula = false; // closed form used on the threshold edge
};

// Time for i to reach mu under the given control.  Throws NumericalError if
// the horizon is exhausted first (cannot happen once horizon >= (x+y)/(mu*gamma)).
double eradication_time(const ModelParams& p, const ControlLaw& c, double x, double y,
                        const IntegratorConfig& cfg = {});

// Integrates the flow and its sensitivity matrix to exactly t_end, stepping
// on the same control-aligned grid as integrate().
SensitivityPath flow_sensitivities(const ModelParams& p, const ControlLaw& c, const State& x0,
                                   double t_end, const IntegratorConfig& cfg = {});

// Gradient of the eradication time via the implicit relation i(x, y, u) = mu:
//   du/dx = -d_x i / d_t i,   du/dy = -d_y i / d_t i   at t = u.
// Requires a transversal crossing (d_t i <= -1e-8); on the threshold edge
// y = mu, beta x < gamma the closed form (0, 1/((gamma - beta x) mu)) is used.
EradicationGradient gradient_eradication_time(const ModelParams& p, const ControlLaw& c,
                                              double x, double y,
                                              const IntegratorConfig& cfg = {});

} // namespace sire
