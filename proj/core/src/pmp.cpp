#include "sire/pmp.hpp"

#include <algorithm>
#include <cmath>

namespace sire {
namespace {

constexpr double kTransversalFloor = 1e-8;

struct AdjointRhs {
    const ModelParams& p;
    double operator()(double s, double i, double P, double Q, double r, double& dP, double& dQ) const {
        dP = (p.beta * i + r) * P - p.beta * i * Q;
        dQ = p.beta * s * P + (p.gamma - p.beta * s) * Q;
        return 0.0;
    }
};

// forward trajectory cut exactly at the eradication time
Trajectory forward_path(const ModelParams& p, double tau, double x, double y,
                        const IntegratorConfig& cfg, double& u) {
    const ControlLaw c = make_switching(tau);
    u = eradication_time(p, c, x, y, cfg);
    return integrate(p, c, State{x, y}, u, cfg);
}

} // namespace

double hamiltonian(const ModelParams& p, const State& x, double P, double Q, double r) {
    return p.beta * x.s * x.i * P + r * x.s * P + (p.gamma - p.beta * x.s) * x.i * Q;
}

double hamiltonian_identity(const ModelParams& p, const State& x, double P, double Q) {
    return p.beta * x.s * x.i * P + x.s * std::max(P, 0.0) + (p.gamma - p.beta * x.s) * x.i * Q;
}

AdjointPath adjoint_backward(const ModelParams& p, double tau, double x, double y,
                             const IntegratorConfig& cfg) {
    p.validate();
    cfg.validate();
    if (!(tau >= 0.0) || !std::isfinite(tau))
        throw std::invalid_argument("adjoint_backward: tau must be >= 0 and finite");

    AdjointPath out;
    out.tau = tau;
    Trajectory traj = forward_path(p, tau, x, y, cfg, out.u);
    const std::size_t n = traj.size();
    out.times = traj.times;
    out.states = traj.states;
    out.p.assign(n, 0.0);
    out.q.assign(n, 0.0);

    const double s_end = traj.states.back().s;
    const double slope = p.gamma - p.beta * s_end;
    if (!(slope > kTransversalFloor))
        throw NumericalError("adjoint_backward: degenerate terminal crossing");
    out.p[n - 1] = 0.0;
    out.q[n - 1] = 1.0 / (slope * p.mu);

    const AdjointRhs rhs{p};
    for (std::size_t k = n - 1; k > 0; --k) {
        const double t1 = traj.times[k], t0 = traj.times[k - 1];
        const double h = t0 - t1; // negative: backward step
        const double tm = 0.5 * (t0 + t1);
        const double r = traj.control(tm);
        const State sm = traj.interpolate(tm);
        const State& s1 = traj.states[k];
        const State& s0 = traj.states[k - 1];

        double P = out.p[k], Q = out.q[k];
        double k1p, k1q, k2p, k2q, k3p, k3q, k4p, k4q;
        rhs(s1.s, s1.i, P, Q, r, k1p, k1q);
        rhs(sm.s, sm.i, P + 0.5 * h * k1p, Q + 0.5 * h * k1q, r, k2p, k2q);
        rhs(sm.s, sm.i, P + 0.5 * h * k2p, Q + 0.5 * h * k2q, r, k3p, k3q);
        rhs(s0.s, s0.i, P + h * k3p, Q + h * k3q, r, k4p, k4q);
        out.p[k - 1] = P + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        out.q[k - 1] = Q + h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
        if (!std::isfinite(out.p[k - 1]) || !std::isfinite(out.q[k - 1]))
            throw NumericalError("adjoint_backward: non-finite costate");
    }
    return out;
}

AdjointPath adjoint_from_gradients(const ModelParams& p, double tau, double x, double y,
                                   const IntegratorConfig& cfg, int n_samples) {
    p.validate();
    cfg.validate();
    if (n_samples < 2)
        throw std::invalid_argument("adjoint_from_gradients: needs at least two samples");

    AdjointPath out;
    out.tau = tau;
    const ControlLaw c = make_switching(tau);
    Trajectory traj = forward_path(p, tau, x, y, cfg, out.u);

    out.times.reserve(static_cast<std::size_t>(n_samples));
    for (int k = 0; k < n_samples; ++k)
        out.times.push_back(out.u * static_cast<double>(k) / static_cast<double>(n_samples - 1));
    out.states.reserve(out.times.size());
    out.p.reserve(out.times.size());
    out.q.reserve(out.times.size());

    for (double t : out.times) {
        const State st = traj.interpolate(t);
        // the moved state is a fresh initial condition under the remaining control
        const EradicationGradient g = gradient_eradication_time(p, c.shift(t), st.s, st.i, cfg);
        out.states.push_back(st);
        out.p.push_back(g.du_dx);
        out.q.push_back(g.du_dy);
    }
    return out;
}

NecessaryConditionsReport check_necessary_conditions(const ModelParams& p, double tau, double x,
                                                     double y, const IntegratorConfig& cfg) {
    IntegratorConfig fine = cfg;
    fine.step = std::min(cfg.step, 2.5e-4);

    NecessaryConditionsReport rep;
    rep.tau = tau;
    const AdjointPath ap = adjoint_backward(p, tau, x, y, fine);
    rep.u = ap.u;
    const ControlLaw c = make_switching(tau);

    Trajectory traj = integrate(p, c, State{x, y}, ap.u, fine);
    const AdjointRhs rhs{p};
    const std::size_t n = ap.times.size();

    double p_max = 0.0;
    for (double v : ap.p) p_max = std::max(p_max, std::abs(v));
    const double band = 1e-6 * (1.0 + p_max);

    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double dt = ap.times[k + 1] - ap.times[k];
        const double tm = 0.5 * (ap.times[k] + ap.times[k + 1]);
        const State sm = traj.interpolate(tm);
        const double r = traj.control(tm);
        const double pm = 0.5 * (ap.p[k] + ap.p[k + 1]);
        const double qm = 0.5 * (ap.q[k] + ap.q[k + 1]);
        double dP, dQ;
        rhs(sm.s, sm.i, pm, qm, r, dP, dQ);
        rep.residual_ode = std::max(rep.residual_ode,
                                    std::abs((ap.p[k + 1] - ap.p[k]) / dt - dP));
        rep.residual_ode = std::max(rep.residual_ode,
                                    std::abs((ap.q[k + 1] - ap.q[k]) / dt - dQ));
    }

    rep.p_terminal = std::abs(ap.p.back());
    const double s_end = ap.states.back().s;
    rep.q_terminal_identity = std::abs(ap.q.back() * (p.gamma - p.beta * s_end) * p.mu - 1.0);

    // the feedback law constrains r only up to measure zero, so it is sampled
    // at interval midpoints; sample nodes can sit exactly on the switch instant
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double tm = 0.5 * (ap.times[k] + ap.times[k + 1]);
        const double P = 0.5 * (ap.p[k] + ap.p[k + 1]);
        const double r = tm <= tau ? 0.0 : 1.0;
        if (std::abs(P) > band)
            rep.cond3_sup = std::max(rep.cond3_sup, std::abs(r * P - std::max(P, 0.0)));
    }
    for (std::size_t k = 0; k < n; ++k)
        rep.cond4_sup = std::max(
            rep.cond4_sup, std::abs(hamiltonian_identity(p, ap.states[k], ap.p[k], ap.q[k]) - 1.0));

    rep.pass = rep.residual_ode <= rep.tol_ode && rep.p_terminal <= rep.tol_terminal &&
               rep.q_terminal_identity <= rep.tol_terminal && rep.cond3_sup <= rep.tol_cond3 &&
               rep.cond4_sup <= rep.tol_cond4;
    return rep;
}

double duality_defect(const ModelParams& p, double tau, double x, double y,
                      const IntegratorConfig& cfg) {
    const AdjointPath ap = adjoint_backward(p, tau, x, y, cfg);
    const SensitivityPath zp = flow_sensitivities(p, make_switching(tau), State{x, y}, ap.u, cfg);
    if (zp.times.size() != ap.times.size())
        throw NumericalError("duality_defect: sample grids disagree");
    const double p0 = ap.p.front(), q0 = ap.q.front();
    double worst = 0.0;
    for (std::size_t k = 0; k < ap.times.size(); ++k) {
        const Mat2& Z = zp.Z[k];
        // rows of Z are gradients of s(t), i(t); pairing transposes onto (P,Q)
        const double px = Z.dxs * ap.p[k] + Z.dxi * ap.q[k];
        const double qy = Z.dys * ap.p[k] + Z.dyi * ap.q[k];
        worst = std::max({worst, std::abs(px - p0), std::abs(qy - q0)});
    }
    return worst;
}

} // namespace sire
