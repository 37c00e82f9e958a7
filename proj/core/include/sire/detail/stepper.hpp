#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "sire/control.hpp"
#include "sire/model.hpp"

namespace sire::detail {

// Right-hand side of the controlled flow:
//   s' = -beta*s*i - r*s,   i' = beta*s*i - gamma*i.
inline void rhs(const ModelParams& p, double s, double i, double r, double& ds, double& di) {
    const double flow = p.beta * s * i;
    ds = -flow - r * s;
    di = flow - p.gamma * i;
}

// One classical RK4 step of size h under constant control r.
inline void rk4_step(const ModelParams& p, double& s, double& i, double r, double h) {
    double k1s, k1i, k2s, k2i, k3s, k3i, k4s, k4i;
    rhs(p, s, i, r, k1s, k1i);
    rhs(p, s + 0.5 * h * k1s, i + 0.5 * h * k1i, r, k2s, k2i);
    rhs(p, s + 0.5 * h * k2s, i + 0.5 * h * k2i, r, k3s, k3i);
    rhs(p, s + h * k3s, i + h * k3i, r, k4s, k4i);
    s += h / 6.0 * (k1s + 2.0 * k2s + 2.0 * k3s + k4s);
    i += h / 6.0 * (k1i + 2.0 * k2i + 2.0 * k3i + k4i);
}

// Constant-control span of an integration window, pre-divided into uniform
// RK4 steps no longer than the configured maximum.
struct Segment {
    double t0;
    double t1;
    double r;
    long n;
    double h;
};

// Splits [0, t_end] at the control's discontinuities so each RK4 step sees a
// constant r.  The control is sampled at segment midpoints, away from the
// measure-zero jump times where step-function conventions differ.
inline std::vector<Segment> partition(const ControlLaw& c, double t_end, double max_step) {
    std::vector<Segment> segs;
    if (!(t_end > 0.0)) return segs;
    std::vector<double> cuts = c.breakpoints_in(t_end);
    cuts.push_back(t_end);
    double t0 = 0.0;
    for (double t1 : cuts) {
        if (!(t1 > t0)) continue;
        const double len = t1 - t0;
        const long n = std::max<long>(1, static_cast<long>(std::ceil(len / max_step - 1e-12)));
        segs.push_back({t0, t1, c(0.5 * (t0 + t1)), n, len / static_cast<double>(n)});
        t0 = t1;
    }
    return segs;
}

} // namespace sire::detail
