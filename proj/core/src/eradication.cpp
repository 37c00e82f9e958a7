#include "sire/eradication.hpp"

#include <array>
#include <cmath>

#include "sire/detail/stepper.hpp"

namespace sire {
namespace {

constexpr double kTransversalFloor = 1e-8;

// state (s, i) augmented with the sensitivity matrix, flattened
using Aug = std::array<double, 6>; // s, i, dxs, dys, dxi, dyi

Aug aug_rhs(const ModelParams& p, const Aug& v, double r) {
    const double s = v[0], i = v[1];
    const double a11 = -p.beta * i - r;
    const double a12 = -p.beta * s;
    const double a21 = p.beta * i;
    const double a22 = p.beta * s - p.gamma;
    Aug d;
    d[0] = -p.beta * s * i - r * s;
    d[1] = p.beta * s * i - p.gamma * i;
    d[2] = a11 * v[2] + a12 * v[4];
    d[3] = a11 * v[3] + a12 * v[5];
    d[4] = a21 * v[2] + a22 * v[4];
    d[5] = a21 * v[3] + a22 * v[5];
    return d;
}

void aug_rk4_step(const ModelParams& p, Aug& v, double r, double h) {
    const Aug k1 = aug_rhs(p, v, r);
    Aug tmp;
    for (int j = 0; j < 6; ++j) tmp[j] = v[j] + 0.5 * h * k1[j];
    const Aug k2 = aug_rhs(p, tmp, r);
    for (int j = 0; j < 6; ++j) tmp[j] = v[j] + 0.5 * h * k2[j];
    const Aug k3 = aug_rhs(p, tmp, r);
    for (int j = 0; j < 6; ++j) tmp[j] = v[j] + h * k3[j];
    const Aug k4 = aug_rhs(p, tmp, r);
    for (int j = 0; j < 6; ++j) v[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
}

} // namespace

double eradication_time(const ModelParams& p, const ControlLaw& c, double x, double y,
                        const IntegratorConfig& cfg) {
    const auto t = first_threshold_crossing(p, c, State{x, y}, cfg);
    if (!t)
        throw NumericalError("eradication_time: threshold not reached within the horizon");
    return *t;
}

SensitivityPath flow_sensitivities(const ModelParams& p, const ControlLaw& c, const State& x0,
                                   double t_end, const IntegratorConfig& cfg) {
    p.validate();
    x0.validate();
    cfg.validate();
    if (!(t_end >= 0.0) || !std::isfinite(t_end))
        throw std::invalid_argument("flow_sensitivities: t_end must be >= 0 and finite");

    SensitivityPath out;
    Aug v{x0.s, x0.i, 1.0, 0.0, 0.0, 1.0};
    auto push = [&](double t) {
        out.times.push_back(t);
        out.states.push_back({v[0], v[1]});
        out.Z.push_back({v[2], v[3], v[4], v[5]});
        out.di_dt.push_back(p.beta * v[0] * v[1] - p.gamma * v[1]);
    };
    push(0.0);
    for (const auto& seg : detail::partition(c, t_end, cfg.step)) {
        for (long k = 0; k < seg.n; ++k) {
            const double t1 = (k + 1 == seg.n) ? seg.t1 : seg.t0 + seg.h * static_cast<double>(k + 1);
            aug_rk4_step(p, v, seg.r, seg.h);
            if (!std::isfinite(v[0]) || !std::isfinite(v[1]) || !std::isfinite(v[5]))
                throw NumericalError("flow_sensitivities: non-finite state near t = " + std::to_string(t1));
            push(t1);
        }
    }
    return out;
}

EradicationGradient gradient_eradication_time(const ModelParams& p, const ControlLaw& c,
                                              double x, double y, const IntegratorConfig& cfg) {
    p.validate();
    cfg.validate();
    State{x, y}.validate();

    // threshold edge: i = mu already; subcritical crossings leave immediately
    if (std::abs(y - p.mu) <= cfg.event_tol && p.beta * x < p.gamma) {
        EradicationGradient g;
        g.u = 0.0;
        g.du_dx = 0.0;
        g.du_dy = 1.0 / ((p.gamma - p.beta * x) * p.mu);
        g.boundary_formula = true;
        return g;
    }

    EradicationGradient g;
    g.u = eradication_time(p, c, x, y, cfg);
    const SensitivityPath path = flow_sensitivities(p, c, State{x, y}, g.u, cfg);
    const Mat2& Z = path.Z.back();
    const double di_dt = path.di_dt.back();
    if (!(di_dt <= -kTransversalFloor))
        throw NumericalError("gradient_eradication_time: degenerate threshold crossing");
    g.du_dx = -Z.dxi / di_dt;
    g.du_dy = -Z.dyi / di_dt;
    return g;
}

} // namespace sire
