#include "sire/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "sire/detail/stepper.hpp"

namespace sire {

void IntegratorConfig::validate() const {
    if (!(step > 0.0) || !std::isfinite(step))
        throw std::invalid_argument("IntegratorConfig: step must be positive and finite");
    if (!(event_tol > 0.0) || !std::isfinite(event_tol))
        throw std::invalid_argument("IntegratorConfig: event_tol must be positive and finite");
    if (max_horizon < 0.0 || !std::isfinite(max_horizon))
        throw std::invalid_argument("IntegratorConfig: max_horizon must be >= 0 and finite");
}

double IntegratorConfig::resolved_horizon(const ModelParams& p, const State& x0) const {
    return max_horizon > 0.0 ? max_horizon : 10.0 * p.time_upper_bound(x0.s, x0.i);
}

State vector_field(const ModelParams& p, const State& x, double r) {
    p.validate();
    x.validate();
    if (!(r >= 0.0 && r <= 1.0) || !std::isfinite(r))
        throw std::invalid_argument("vector_field: control value must lie in [0,1]");
    double ds, di;
    detail::rhs(p, x.s, x.i, r, ds, di);
    return {ds, di};
}

double sir_invariant(const ModelParams& p, const State& x) {
    p.validate();
    x.validate();
    if (!(x.s > 0.0))
        throw std::invalid_argument("sir_invariant: requires s > 0");
    return x.i + x.s - (p.gamma / p.beta) * std::log(x.s);
}

namespace {

void check_finite(double s, double i, double t) {
    if (!std::isfinite(s) || !std::isfinite(i))
        throw NumericalError("integration produced a non-finite state near t = " + std::to_string(t));
}

} // namespace

State Trajectory::interpolate(double tq) const {
    if (times.empty())
        throw std::invalid_argument("Trajectory::interpolate: empty trajectory");
    const double lo = times.front(), hi = times.back();
    const double slack = 1e-12 * (1.0 + std::abs(hi));
    if (tq < lo - slack || tq > hi + slack)
        throw std::invalid_argument("Trajectory::interpolate: time outside stored span");
    const double t = std::clamp(tq, lo, hi);
    auto it = std::upper_bound(times.begin(), times.end(), t);
    std::size_t k = it == times.begin() ? 0 : static_cast<std::size_t>(it - times.begin()) - 1;
    if (k + 1 >= times.size()) k = times.size() - 2;
    if (times.size() == 1) return states.front();

    const double t0 = times[k], t1 = times[k + 1], h = t1 - t0;
    const double r = control(0.5 * (t0 + t1));
    double f0s, f0i, f1s, f1i;
    detail::rhs(params, states[k].s, states[k].i, r, f0s, f0i);
    detail::rhs(params, states[k + 1].s, states[k + 1].i, r, f1s, f1i);
    const double u = (t - t0) / h;
    const double h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
    const double h10 = u * (1.0 - u) * (1.0 - u);
    const double h01 = u * u * (3.0 - 2.0 * u);
    const double h11 = u * u * (u - 1.0);
    return {h00 * states[k].s + h10 * h * f0s + h01 * states[k + 1].s + h11 * h * f1s,
            h00 * states[k].i + h10 * h * f0i + h01 * states[k + 1].i + h11 * h * f1i};
}

Trajectory integrate(const ModelParams& p, const ControlLaw& c, const State& x0,
                     double t_end, const IntegratorConfig& cfg) {
    p.validate();
    x0.validate();
    cfg.validate();
    if (!(t_end >= 0.0) || !std::isfinite(t_end))
        throw std::invalid_argument("integrate: t_end must be >= 0 and finite");
    if (t_end > cfg.resolved_horizon(p, x0) * (1.0 + 1e-12))
        throw std::invalid_argument("integrate: t_end exceeds the configured horizon");

    Trajectory out;
    out.params = p;
    out.control = c;
    const auto segs = detail::partition(c, t_end, cfg.step);
    std::size_t total = 1;
    for (const auto& seg : segs) total += static_cast<std::size_t>(seg.n);
    out.times.reserve(total);
    out.states.reserve(total);
    out.control_values.reserve(total);
    out.recovered.reserve(total);

    double s = x0.s, i = x0.i, rec = 0.0;
    out.times.push_back(0.0);
    out.states.push_back(x0);
    out.control_values.push_back(c(0.0));
    out.recovered.push_back(0.0);

    for (const auto& seg : segs) {
        for (long k = 0; k < seg.n; ++k) {
            const double t1 = (k + 1 == seg.n) ? seg.t1 : seg.t0 + seg.h * static_cast<double>(k + 1);
            // recovered pool integrates gamma*i alongside the state
            double k1s, k1i, k2s, k2i, k3s, k3i, k4s, k4i;
            detail::rhs(p, s, i, seg.r, k1s, k1i);
            detail::rhs(p, s + 0.5 * seg.h * k1s, i + 0.5 * seg.h * k1i, seg.r, k2s, k2i);
            detail::rhs(p, s + 0.5 * seg.h * k2s, i + 0.5 * seg.h * k2i, seg.r, k3s, k3i);
            detail::rhs(p, s + seg.h * k3s, i + seg.h * k3i, seg.r, k4s, k4i);
            rec += p.gamma * seg.h / 6.0 *
                   (i + 2.0 * (i + 0.5 * seg.h * k1i) + 2.0 * (i + 0.5 * seg.h * k2i) + (i + seg.h * k3i));
            s += seg.h / 6.0 * (k1s + 2.0 * k2s + 2.0 * k3s + k4s);
            i += seg.h / 6.0 * (k1i + 2.0 * k2i + 2.0 * k3i + k4i);
            check_finite(s, i, t1);
            out.times.push_back(t1);
            out.states.push_back({s, i});
            out.control_values.push_back(c(t1));
            out.recovered.push_back(rec);
        }
    }
    return out;
}

std::optional<double> first_threshold_crossing(const ModelParams& p, const ControlLaw& c,
                                               const State& x0, const IntegratorConfig& cfg,
                                               bool* degenerate_start) {
    p.validate();
    x0.validate();
    cfg.validate();
    if (degenerate_start) *degenerate_start = false;
    if (x0.i < p.mu - cfg.event_tol)
        throw std::invalid_argument("first_threshold_crossing: requires i >= mu");

    const bool on_threshold = std::abs(x0.i - p.mu) <= cfg.event_tol;
    if (on_threshold && p.beta * x0.s <= p.gamma) return 0.0;
    if (on_threshold && degenerate_start) *degenerate_start = true;
    // on-threshold supercritical starts must first leave the threshold band
    bool armed = !on_threshold;

    const double horizon = cfg.resolved_horizon(p, x0);
    const auto segs = detail::partition(c, horizon, cfg.step);
    double s = x0.s, i = x0.i;
    for (const auto& seg : segs) {
        for (long k = 0; k < seg.n; ++k) {
            const double t0 = seg.t0 + seg.h * static_cast<double>(k);
            const double s_prev = s, i_prev = i;
            detail::rk4_step(p, s, i, seg.r, seg.h);
            check_finite(s, i, t0 + seg.h);
            if (!armed) {
                if (i > p.mu + cfg.event_tol) armed = true;
                continue;
            }
            if (std::abs(i - p.mu) <= cfg.event_tol)
                return (k + 1 == seg.n) ? seg.t1 : t0 + seg.h;
            if (i < p.mu) {
                // bracketed crossing: bisect the step offset
                double lo = 0.0, hi = seg.h;
                double s_mid = s, i_mid = i, mid = hi;
                for (int it = 0; it < 200; ++it) {
                    mid = 0.5 * (lo + hi);
                    s_mid = s_prev;
                    i_mid = i_prev;
                    detail::rk4_step(p, s_mid, i_mid, seg.r, mid);
                    if (std::abs(i_mid - p.mu) <= cfg.event_tol) break;
                    (i_mid > p.mu ? lo : hi) = mid;
                    if (hi - lo <= 1e-16 * std::max(1.0, t0)) break;
                }
                return t0 + mid;
            }
        }
    }
    return std::nullopt;
}

} // namespace sire
