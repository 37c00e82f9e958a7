#include "sire/value.hpp"

#include <algorithm>
#include <cmath>

#include "sire/detail/parallel.hpp"
#include "sire/detail/stepper.hpp"

namespace sire {
namespace {

const ControlLaw kNoEffort = make_constant(0.0);
const ControlLaw kFullEffort = make_constant(1.0);

// advance the uncontrolled state by dt with RK4 steps no longer than max_step
void advance_uncontrolled(const ModelParams& p, double& s, double& i, double dt, double max_step) {
    if (!(dt > 0.0)) return;
    const long n = std::max<long>(1, static_cast<long>(std::ceil(dt / max_step - 1e-12)));
    const double h = dt / static_cast<double>(n);
    for (long k = 0; k < n; ++k) detail::rk4_step(p, s, i, 0.0, h);
}

// switch-at-tau objective evaluator over the precomputed uncontrolled flow
struct SwitchObjective {
    const ModelParams& p;
    const IntegratorConfig& cfg;
    double d_tau; // scan spacing
    const std::vector<double>& flow_s;
    const std::vector<double>& flow_i;

    double operator()(double tau) const {
        const auto j = static_cast<std::size_t>(
            std::clamp(std::floor(tau / d_tau), 0.0, static_cast<double>(flow_s.size() - 1)));
        double s = flow_s[j], i = flow_i[j];
        advance_uncontrolled(p, s, i, tau - d_tau * static_cast<double>(j), cfg.step);
        return tau + full_vaccination_time(p, s, i, cfg);
    }
};

// golden-section minimum of f on [lo, hi]; returns (arg, value)
template <class F>
std::pair<double, double> golden_min(F&& f, double lo, double hi, double tol) {
    constexpr double inv_phi = 0.6180339887498949;
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = f(c), fd = f(d);
    while (hi - lo > tol) {
        if (fc <= fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    return fc <= fd ? std::make_pair(c, fc) : std::make_pair(d, fd);
}

} // namespace

void SearchConfig::validate() const {
    if (n_grid < 3)
        throw std::invalid_argument("SearchConfig: n_grid must be at least 3");
    if (!(refine_tol > 0.0) || !std::isfinite(refine_tol))
        throw std::invalid_argument("SearchConfig: refine_tol must be positive and finite");
    if (!(boundary_rel_tol > 0.0) || !std::isfinite(boundary_rel_tol))
        throw std::invalid_argument("SearchConfig: boundary_rel_tol must be positive and finite");
}

double full_vaccination_time(const ModelParams& p, double x, double y, const IntegratorConfig& cfg) {
    p.validate();
    cfg.validate();
    State{x, y}.validate();
    if (y <= p.mu + cfg.event_tol && p.beta * x <= p.gamma) return 0.0;
    if (y < p.mu - cfg.event_tol) return 0.0; // already below the threshold
    return eradication_time(p, kFullEffort, x, y, cfg);
}

ValueResult value_by_switching(const ModelParams& p, double x, double y,
                               const IntegratorConfig& cfg, const SearchConfig& search) {
    p.validate();
    cfg.validate();
    search.validate();
    State{x, y}.validate();
    if (y < p.mu - cfg.event_tol)
        throw std::invalid_argument("value_by_switching: requires y >= mu");

    ValueResult res;
    res.u_never = eradication_time(p, kNoEffort, x, y, cfg);
    if (res.u_never <= 0.0) {
        // already on the threshold and subcritical: every admissible control is done
        res.in_S = true;
        return res;
    }

    const int n = search.n_grid;
    const double d_tau = res.u_never / static_cast<double>(n - 1);
    std::vector<double> flow_s(static_cast<std::size_t>(n));
    std::vector<double> flow_i(static_cast<std::size_t>(n));
    flow_s[0] = x;
    flow_i[0] = y;
    {
        double s = x, i = y;
        for (int j = 1; j < n; ++j) {
            advance_uncontrolled(p, s, i, d_tau, cfg.step);
            flow_s[static_cast<std::size_t>(j)] = s;
            flow_i[static_cast<std::size_t>(j)] = i;
        }
    }

    std::vector<double> g(static_cast<std::size_t>(n));
    detail::parallel_for(static_cast<std::size_t>(n), [&](std::size_t j) {
        g[j] = d_tau * static_cast<double>(j) +
               full_vaccination_time(p, flow_s[j], flow_i[j], cfg);
    });
    res.u_full = g[0];

    std::size_t best = 0;
    for (std::size_t j = 1; j < g.size(); ++j)
        if (g[j] < g[best]) best = j;

    const SwitchObjective objective{p, cfg, d_tau, flow_s, flow_i};
    const double lo = d_tau * static_cast<double>(best > 0 ? best - 1 : 0);
    const double hi = d_tau * static_cast<double>(std::min<std::size_t>(best + 1, g.size() - 1));
    auto [tau_ref, g_ref] = golden_min(objective, lo, hi, search.refine_tol);
    res.u = std::min(g_ref, g[best]);
    double arg_best = g_ref <= g[best] ? tau_ref : d_tau * static_cast<double>(best);

    const double tol = search.boundary_rel_tol * (1.0 + res.u);
    res.in_S = (res.u_full - res.u) <= tol;

    // earliest switch time attaining the optimum within tolerance
    if (res.in_S) {
        res.tau_star = 0.0;
        res.certificate = res.u_full - res.u;
    } else {
        // per-cell dip allowance from the empirical slope of the scan
        double slope = 0.0;
        for (std::size_t j = 0; j + 1 < g.size(); ++j)
            slope = std::max(slope, std::abs(g[j + 1] - g[j]) / d_tau);
        const double dip = std::max(2.0 * slope * d_tau, 10.0 * tol);

        bool found = false;
        for (std::size_t j = 0; j + 1 < g.size() && !found; ++j) {
            if (std::min(g[j], g[j + 1]) > res.u + tol + dip) continue;
            const double a = d_tau * static_cast<double>(j);
            const double b = d_tau * static_cast<double>(j + 1);
            auto [m, gm] = golden_min(objective, a, b, search.refine_tol);
            double cand = m, g_cand = gm;
            if (g[j] <= gm) {
                cand = a;
                g_cand = g[j];
            }
            if (g[j + 1] <= g_cand) {
                cand = b;
                g_cand = g[j + 1];
            }
            if (g_cand > res.u + tol) continue;
            // walk the attainment edge: earliest point with g <= u + tol
            double above = a, at = cand;
            if (g[j] <= res.u + tol) {
                at = a; // left endpoint already attains (only possible in cell 0)
            } else {
                while (at - above > std::max(search.refine_tol, 1e-12)) {
                    const double mid = 0.5 * (above + at);
                    (objective(mid) <= res.u + tol ? at : above) = mid;
                }
            }
            res.tau_star = at;
            res.certificate = objective(at) - res.u;
            found = true;
        }
        if (!found) { // numerical safety net: fall back to the refined argmin
            res.tau_star = arg_best;
            res.certificate = objective(arg_best) - res.u;
        }
    }

    // diagnostic: count near-optimal scan minima (plateau runs count once)
    res.n_brackets = 0;
    bool in_run = false;
    for (std::size_t j = 0; j < g.size(); ++j) {
        const bool local_min = (j == 0 || g[j] <= g[j - 1]) &&
                               (j + 1 == g.size() || g[j] <= g[j + 1]);
        const bool near = g[j] <= res.u + 10.0 * tol;
        if (local_min && near) {
            if (!in_run) ++res.n_brackets;
            in_run = true;
        } else {
            in_run = false;
        }
    }
    res.n_brackets = std::max(res.n_brackets, 1);
    return res;
}

double tau_star(const ModelParams& p, double x, double y,
                const IntegratorConfig& cfg, const SearchConfig& search) {
    return value_by_switching(p, x, y, cfg, search).tau_star;
}

FreeBoundaryMap classify_free_boundary(const ModelParams& p, const GridSpec& grid,
                                       const IntegratorConfig& cfg, const SearchConfig& search) {
    p.validate();
    grid.validate();
    if (std::abs(grid.y_min - p.mu) > 1e-12 * (1.0 + p.mu))
        throw std::invalid_argument("classify_free_boundary: grid bottom row must sit on mu");

    FreeBoundaryMap map;
    map.spec = grid;
    map.results.assign(grid.size(), ValueResult{});
    map.active.assign(grid.size(), 0);

    std::vector<std::size_t> todo;
    todo.reserve(grid.size());
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i)
            if (grid.in_mask(grid.x(i), grid.y(j))) {
                map.active[grid.index(i, j)] = 1;
                todo.push_back(grid.index(i, j));
            }

    detail::parallel_for(todo.size(), [&](std::size_t k) {
        const std::size_t node = todo[k];
        const int i = static_cast<int>(node % static_cast<std::size_t>(grid.nx));
        const int j = static_cast<int>(node / static_cast<std::size_t>(grid.nx));
        map.results[node] = value_by_switching(p, grid.x(i), grid.y(j), cfg, search);
    });
    return map;
}

} // namespace sire
