#include "sire/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sire/detail/parallel.hpp"

namespace sire {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double lower_bound_value(const ModelParams& p, double x, double y) {
    return (std::log(x + y) - std::log(p.gamma / p.beta + p.mu)) / std::max(p.gamma, 1.0);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// k-th point (k >= 1) of the additive lattice on the plastic number:
// frac(0.5 + k a), a = (1/g, 1/g^2)
std::pair<double, double> ld_point(int k, const Box& box) {
    constexpr double g = 1.32471795724474602596;
    constexpr double a1 = 1.0 / g;
    constexpr double a2 = 1.0 / (g * g);
    const double u = std::fmod(0.5 + a1 * static_cast<double>(k), 1.0);
    const double v = std::fmod(0.5 + a2 * static_cast<double>(k), 1.0);
    return {box.x_min + u * (box.x_max - box.x_min), box.y_min + v * (box.y_max - box.y_min)};
}

} // namespace

std::vector<std::pair<double, double>> low_discrepancy_box(int n, const Box& box) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(static_cast<std::size_t>(std::max(0, n)));
    for (int k = 1; k <= n; ++k) pts.push_back(ld_point(k, box));
    return pts;
}

ProbeReport check_bounds(const ModelParams& p, const Box& box, int n_samples,
                         const IntegratorConfig& cfg, const SearchConfig& search) {
    p.validate();
    ProbeReport rep;
    rep.name = "bounds";
    rep.tolerance = 1e-8;
    rep.sample_count = n_samples;

    const auto pts = low_discrepancy_box(n_samples, box);
    std::vector<double> violation(pts.size(), -kInf);
    detail::parallel_for(pts.size(), [&](std::size_t k) {
        const auto [x, y] = pts[k];
        const ValueResult r = value_by_switching(p, x, y, cfg, search);
        const double lo = lower_bound_value(p, x, y);
        const double hi = p.time_upper_bound(x, y);
        double v = std::max(lo - r.u, r.u - hi);
        v = std::max(v, -r.u); // u >= 0
        v = std::max(v, r.u - r.u_full);
        v = std::max(v, r.u - r.u_never);
        violation[k] = v;
    });

    rep.worst_violation = -kInf;
    for (std::size_t k = 0; k < pts.size(); ++k)
        if (violation[k] > rep.worst_violation) {
            rep.worst_violation = violation[k];
            rep.witness_x = pts[k].first;
            rep.witness_y = pts[k].second;
        }
    rep.pass = rep.worst_violation <= rep.tolerance;
    return rep;
}

ProbeReport terminal_slope_probe(const ModelParams& p, const Box& box, int n_samples,
                                 std::uint64_t seed, const IntegratorConfig& cfg) {
    p.validate();
    ProbeReport rep;
    rep.name = "terminal_slope";
    rep.tolerance = 0.0;
    // keep samples strictly above the threshold
    Box inner = box;
    inner.y_min = std::max(box.y_min, p.mu + 0.05 * (box.y_max - p.mu));
    const auto pts = low_discrepancy_box(n_samples, inner);

    struct Run {
        double violation;
        double x, y;
    };
    std::vector<Run> runs(pts.size() * 3);
    detail::parallel_for(pts.size(), [&](std::size_t k) {
        const auto [x, y] = pts[k];
        const double horizon = p.time_upper_bound(x, y);
        const ControlLaw laws[3] = {make_constant(0.0), make_constant(1.0),
                                    random_piecewise(seed + k, 3, horizon)};
        for (int c = 0; c < 3; ++c) {
            Trajectory tr = integrate(p, laws[c],
                                      State{x, y},
                                      eradication_time(p, laws[c], x, y, cfg), cfg);
            const double s_end = tr.states.back().s;
            runs[3 * k + c] = {p.beta * s_end - (p.gamma - 1e-6), x, y};
        }
    });
    rep.sample_count = static_cast<long>(runs.size());
    rep.worst_violation = -kInf;
    for (const Run& r : runs)
        if (r.violation > rep.worst_violation) {
            rep.worst_violation = r.violation;
            rep.witness_x = r.x;
            rep.witness_y = r.y;
        }
    rep.pass = rep.worst_violation <= rep.tolerance;
    return rep;
}

ProbeReport dpp_residual(const ModelParams& p, double x, double y,
                         const std::vector<double>& t_fractions,
                         const IntegratorConfig& cfg, const SearchConfig& search) {
    p.validate();
    ProbeReport rep;
    rep.name = "dpp";
    rep.tolerance = 2e-6;
    rep.witness_x = x;
    rep.witness_y = y;

    const ValueResult base = value_by_switching(p, x, y, cfg, search);
    const ControlLaw opt = make_switching(base.tau_star);
    const ControlLaw cands[3] = {make_constant(0.0), make_constant(1.0), opt};

    double worst = 0.0;
    long count = 0;
    for (double frac : t_fractions) {
        const double t = std::clamp(frac, 0.0, 1.0) * base.u;
        double best = kInf, from_opt = kInf;
        for (int c = 0; c < 3; ++c) {
            const auto crossing = first_threshold_crossing(p, cands[c], State{x, y}, cfg);
            double cand;
            if (crossing && *crossing <= t) {
                cand = *crossing; // eradicated before the probe time
            } else {
                Trajectory tr = integrate(p, cands[c], State{x, y}, t, cfg);
                const State st = tr.states.back();
                if (st.i < p.mu - cfg.event_tol) {
                    cand = t; // fell through the threshold exactly at the probe time
                } else {
                    cand = t + value_by_switching(p, st.s, st.i, cfg, search).u;
                }
            }
            best = std::min(best, cand);
            if (c == 2) from_opt = cand;
        }
        // equality through the optimal candidate, dominance for the others
        const double residual =
            std::max(std::abs(base.u - from_opt), base.u - best) / (1.0 + base.u);
        worst = std::max(worst, residual);
        ++count;
    }
    rep.sample_count = count;
    rep.worst_violation = worst;
    rep.pass = rep.worst_violation <= rep.tolerance;
    rep.note = "u=" + format_double(base.u) + " tau_star=" + format_double(base.tau_star);
    return rep;
}

ProbeReport dominance_vs_random_controls(const ModelParams& p, double x, double y, int n_controls,
                                         std::uint64_t seed, const IntegratorConfig& cfg,
                                         const SearchConfig& search) {
    p.validate();
    ProbeReport rep;
    rep.name = "dominance";
    rep.tolerance = 1e-6;
    rep.witness_x = x;
    rep.witness_y = y;
    rep.sample_count = n_controls;

    const double u_opt = value_by_switching(p, x, y, cfg, search).u;
    const double horizon = p.time_upper_bound(x, y);
    std::vector<double> times(static_cast<std::size_t>(n_controls));
    detail::parallel_for(times.size(), [&](std::size_t k) {
        const ControlLaw c = random_piecewise(seed + k, 2 + static_cast<int>(k % 5), horizon);
        times[k] = eradication_time(p, c, x, y, cfg);
    });
    double best_random = kInf;
    for (double t : times) best_random = std::min(best_random, t);
    rep.worst_violation = u_opt - best_random;
    rep.pass = rep.worst_violation <= rep.tolerance;
    rep.note = "u=" + format_double(u_opt) + " best_random=" + format_double(best_random);
    return rep;
}

ProbeReport semiconcavity_probe(const std::function<double(double, double)>& f,
                                const ModelParams& p, double tri_N, double tri_delta,
                                int n_points, int n_dirs, double h1, double h2,
                                double stability_rel_tol) {
    p.validate();
    if (!(h1 > 0.0) || !(h2 > 0.0) || n_points < 1 || n_dirs < 1)
        throw std::invalid_argument("semiconcavity_probe: bad probe parameters");
    ProbeReport rep;
    rep.name = "semiconcavity";
    rep.tolerance = stability_rel_tol;

    const double h_max = std::max(h1, h2);
    // inner triangle so that p +/- h d stays inside {x>=d, y>=mu+d, x+y<=N}
    Box bbox{tri_delta + h_max, tri_N - p.mu - tri_delta,
             p.mu + tri_delta + h_max, tri_N - tri_delta};
    std::vector<std::pair<double, double>> pts;
    for (int k = 1; static_cast<int>(pts.size()) < n_points && k <= 100 * n_points; ++k) {
        const auto [cx, cy] = ld_point(k, bbox);
        if (cx + cy <= tri_N - std::sqrt(2.0) * h_max) pts.emplace_back(cx, cy);
    }

    double L[2] = {-kInf, -kInf};
    const double hs[2] = {h1, h2};
    for (int hi = 0; hi < 2; ++hi) {
        const double h = hs[hi];
        for (const auto& [px, py] : pts) {
            const double f0 = f(px, py);
            for (int m = 0; m < n_dirs; ++m) {
                const double ang = M_PI * static_cast<double>(m) / static_cast<double>(n_dirs);
                const double dx = std::cos(ang), dy = std::sin(ang);
                const double second =
                    (f(px + h * dx, py + h * dy) + f(px - h * dx, py - h * dy) - 2.0 * f0) /
                    (h * h);
                if (second > L[hi]) {
                    L[hi] = second;
                    rep.witness_x = px;
                    rep.witness_y = py;
                }
            }
        }
    }
    rep.sample_count = static_cast<long>(pts.size()) * n_dirs * 2;
    const double denom = std::max({std::abs(L[0]), std::abs(L[1]), 1e-3});
    rep.worst_violation = std::abs(L[0] - L[1]) / denom;
    rep.pass = std::isfinite(L[0]) && std::isfinite(L[1]) && rep.worst_violation <= rep.tolerance;
    rep.note = "L(h1)=" + format_double(L[0]) + " L(h2)=" + format_double(L[1]);
    return rep;
}

ProbeReport estimate_lipschitz(const ModelParams& p, double tri_N, double tri_delta, int n_samples,
                               const IntegratorConfig& cfg, const SearchConfig& search) {
    p.validate();
    ProbeReport rep;
    rep.name = "lipschitz";
    rep.tolerance = 0.25;

    Box bbox{tri_delta, tri_N - p.mu - tri_delta, p.mu + tri_delta, tri_N - tri_delta};
    std::vector<std::pair<double, double>> pts;
    for (int k = 1; static_cast<int>(pts.size()) < 2 * n_samples && k <= 200 * n_samples; ++k) {
        const auto [cx, cy] = ld_point(k, bbox);
        if (cx + cy <= tri_N) pts.emplace_back(cx, cy);
    }
    std::vector<double> u(pts.size());
    detail::parallel_for(pts.size(), [&](std::size_t j) {
        u[j] = value_by_switching(p, pts[j].first, pts[j].second, cfg, search).u;
    });

    auto max_ratio = [&](std::size_t count) {
        double L = 0.0;
        for (std::size_t a = 0; a < count; ++a)
            for (std::size_t b = a + 1; b < count; ++b) {
                const double d = std::hypot(pts[a].first - pts[b].first,
                                            pts[a].second - pts[b].second);
                if (d > 1e-9) L = std::max(L, std::abs(u[a] - u[b]) / d);
            }
        return L;
    };
    const double L1 = max_ratio(std::min<std::size_t>(n_samples, pts.size()));
    const double L2 = max_ratio(pts.size());
    rep.sample_count = static_cast<long>(pts.size());
    rep.worst_violation = L2 > 0.0 ? (L2 - L1) / L2 : 0.0;
    rep.pass = std::isfinite(L2) && rep.worst_violation <= rep.tolerance;
    rep.note = "L_n=" + format_double(L1) + " L_2n=" + format_double(L2);
    return rep;
}

ProbeReport asymptotics_check(const ModelParams& p, const ControlLaw& c, double x, double y,
                              double horizon_mult, const IntegratorConfig& cfg) {
    p.validate();
    ProbeReport rep;
    rep.name = "asymptotics";
    rep.tolerance = 0.0;
    rep.witness_x = x;
    rep.witness_y = y;
    rep.sample_count = 1;

    const double T = horizon_mult * p.time_upper_bound(x, y);
    IntegratorConfig run = cfg;
    run.max_horizon = std::max(run.resolved_horizon(p, State{x, y}), T);
    Trajectory tr = integrate(p, c, State{x, y}, T, run);
    const State end = tr.states.back();
    rep.worst_violation =
        std::max(end.i / (p.mu / 10.0) - 1.0, p.beta * end.s / p.gamma - 1.0);
    rep.pass = rep.worst_violation <= rep.tolerance;
    rep.note = "S(T)=" + format_double(end.s) + " I(T)=" + format_double(end.i);
    return rep;
}

ProbeReport sign_profile_free_boundary(const ModelParams& p, const FreeBoundaryMap& map) {
    p.validate();
    const GridSpec& g = map.spec;
    ProbeReport rep;
    rep.name = "sign_profile";
    rep.tolerance = 1e-4;
    rep.worst_violation = -kInf;

    long count = 0;
    for (int j = 1; j + 1 < g.ny; ++j)
        for (int i = 1; i + 1 < g.nx; ++i) {
            const std::size_t node = g.index(i, j);
            if (!map.active[node]) continue;
            const std::size_t n4[4] = {g.index(i - 1, j), g.index(i + 1, j),
                                       g.index(i, j - 1), g.index(i, j + 1)};
            bool usable = true;
            for (std::size_t nb : n4)
                if (!map.active[nb] || map.results[nb].in_S != map.results[node].in_S)
                    usable = false; // one-cell exclusion band around the boundary
            if (!usable) continue;
            const double d =
                (map.results[g.index(i + 1, j)].u - map.results[g.index(i - 1, j)].u) /
                (2.0 * g.dx());
            const double signed_slope = map.results[node].in_S ? -d : d;
            const double v = signed_slope / (1.0 + std::abs(d));
            ++count;
            if (v > rep.worst_violation) {
                rep.worst_violation = v;
                rep.witness_x = g.x(i);
                rep.witness_y = g.y(j);
            }
        }
    rep.sample_count = count;
    if (count == 0) rep.worst_violation = 0.0;
    rep.pass = rep.worst_violation <= rep.tolerance;
    return rep;
}

std::vector<ProbeReport> run_default_probes(const ModelParams& p, std::uint64_t seed,
                                            const IntegratorConfig& cfg,
                                            const SearchConfig& search) {
    p.validate();
    const Box domain{0.0, 4.0, p.mu, p.mu + 3.0};

    std::vector<ProbeReport> out;
    out.push_back(check_bounds(p, domain, 200, cfg, search));
    out.push_back(terminal_slope_probe(p, domain, 25, seed, cfg));
    {
        const double x = 0.5 * (domain.x_min + domain.x_max);
        const double y = p.mu + 2.0;
        out.push_back(dpp_residual(p, x, y, {0.1, 0.3, 0.5, 0.7, 0.9}, cfg, search));
        out.push_back(dominance_vs_random_controls(p, x, y, 100, seed, cfg, search));
    }
    {
        SearchConfig fast = search;
        fast.n_grid = std::min(search.n_grid, 256);
        auto value_fn = [&](double vx, double vy) {
            return value_by_switching(p, vx, vy, cfg, fast).u;
        };
        out.push_back(semiconcavity_probe(value_fn, p, p.mu + 3.0, 0.1, 12, 2, 1e-2, 5e-3));
    }
    {
        GridSpec gs;
        gs.x_min = 0.0;
        gs.x_max = 4.0;
        gs.y_min = p.mu;
        gs.y_max = p.mu + 3.0;
        gs.nx = 21;
        gs.ny = 21;
        SearchConfig fast = search;
        fast.n_grid = std::min(search.n_grid, 256);
        out.push_back(sign_profile_free_boundary(p, classify_free_boundary(p, gs, cfg, fast)));
    }
    return out;
}

} // namespace sire
