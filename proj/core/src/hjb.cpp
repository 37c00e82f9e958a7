#include "sire/hjb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sire/detail/parallel.hpp"
#include "sire/value.hpp"

namespace sire {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

enum class Role : unsigned char { target, update, hold };

struct FootTable {
    // base >= 0: bilinear gather at u[base], u[base+1], u[base+nx], u[base+nx+1];
    // base < 0: exterior constant in ext.
    std::vector<long> base;
    std::vector<double> w00, w10, w01, w11;
    std::vector<double> ext;
};

double upper_bound(const ModelParams& p, double x, double y) { return (x + y) / (p.mu * p.gamma); }

} // namespace

void HjbConfig::validate() const {
    if (h < 0.0 || !std::isfinite(h))
        throw std::invalid_argument("HjbConfig: h must be >= 0 and finite");
    if (!(tol > 0.0) || !std::isfinite(tol))
        throw std::invalid_argument("HjbConfig: tol must be positive and finite");
    if (max_iter < 0)
        throw std::invalid_argument("HjbConfig: max_iter must be >= 0");
}

double GridValues::bilinear(double x, double y) const {
    const GridSpec& g = spec;
    const double fx = std::clamp((x - g.x_min) / g.dx(), 0.0, static_cast<double>(g.nx - 1));
    const double fy = std::clamp((y - g.y_min) / g.dy(), 0.0, static_cast<double>(g.ny - 1));
    const int i = std::min(static_cast<int>(fx), g.nx - 2);
    const int j = std::min(static_cast<int>(fy), g.ny - 2);
    const double ax = fx - i, ay = fy - j;
    const std::size_t b = g.index(i, j);
    return (1.0 - ax) * (1.0 - ay) * u[b] + ax * (1.0 - ay) * u[b + 1] +
           (1.0 - ax) * ay * u[b + g.nx] + ax * ay * u[b + g.nx + 1];
}

GridValues solve_hjb_semilagrangian(const ModelParams& p, const GridSpec& grid, const HjbConfig& cfg) {
    p.validate();
    grid.validate();
    cfg.validate();
    if (std::abs(grid.y_min - p.mu) > 1e-12 * (1.0 + p.mu))
        throw std::invalid_argument("solve_hjb_semilagrangian: grid bottom row must sit on mu");

    const int nx = grid.nx, ny = grid.ny;
    const std::size_t n = grid.size();

    // pseudo-time step from the grid CFL-style default
    double fmax = 0.0;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const double x = grid.x(i), y = grid.y(j);
            const double fx = p.beta * x * y + x; // worst case a = 1
            const double fy = std::abs(p.beta * x - p.gamma) * y;
            fmax = std::max(fmax, std::hypot(fx, fy));
        }
    const double h = cfg.h > 0.0 ? cfg.h : 0.5 * std::min(grid.dx(), grid.dy()) / fmax;

    // feet must stay within a modestly enlarged rectangle
    const double mx = 0.1 * (grid.x_max - grid.x_min);
    const double my = 0.1 * (grid.y_max - grid.y_min);
    if (h * fmax > std::min(mx, my))
        throw std::invalid_argument("solve_hjb_semilagrangian: step leaves the enlarged domain");

    std::vector<Role> role(n, Role::update);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const double x = grid.x(i), y = grid.y(j);
            if (!grid.in_mask(x, y))
                role[grid.index(i, j)] = Role::hold;
            else if (j == 0 && p.beta * x <= p.gamma)
                role[grid.index(i, j)] = Role::target;
        }

    // precompute gather stencils; foot positions never change across sweeps
    FootTable tab[2];
    for (int a = 0; a < 2; ++a) {
        tab[a].base.assign(n, -1);
        tab[a].w00.assign(n, 0.0);
        tab[a].w10.assign(n, 0.0);
        tab[a].w01.assign(n, 0.0);
        tab[a].w11.assign(n, 0.0);
        tab[a].ext.assign(n, 0.0);
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                const std::size_t node = grid.index(i, j);
                if (role[node] != Role::update) continue;
                const double x = grid.x(i), y = grid.y(j);
                const double footx = x + h * (-p.beta * x * y - static_cast<double>(a) * x);
                const double footy = y + h * ((p.beta * x - p.gamma) * y);
                const bool inside = footx >= grid.x_min && footx <= grid.x_max &&
                                    footy >= grid.y_min && footy <= grid.y_max;
                if (inside) {
                    const double fx = (footx - grid.x_min) / grid.dx();
                    const double fy = (footy - grid.y_min) / grid.dy();
                    const int ci = std::min(static_cast<int>(fx), nx - 2);
                    const int cj = std::min(static_cast<int>(fy), ny - 2);
                    const double ax = fx - ci, ay = fy - cj;
                    tab[a].base[node] = static_cast<long>(grid.index(ci, cj));
                    tab[a].w00[node] = (1.0 - ax) * (1.0 - ay);
                    tab[a].w10[node] = ax * (1.0 - ay);
                    tab[a].w01[node] = (1.0 - ax) * ay;
                    tab[a].w11[node] = ax * ay;
                } else if (footy <= grid.y_min && p.beta * footx <= p.gamma) {
                    tab[a].ext[node] = 0.0; // exits through the target edge
                } else {
                    tab[a].ext[node] = upper_bound(p, footx, footy);
                }
            }
    }

    GridValues gv;
    gv.spec = grid;
    gv.h = h;
    gv.u.assign(n, 0.0);
    std::vector<double> next(n, 0.0);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const std::size_t node = grid.index(i, j);
            gv.u[node] = role[node] == Role::target ? 0.0 : upper_bound(p, grid.x(i), grid.y(j));
        }
    next = gv.u;

    const double bound = upper_bound(p, grid.x_max, grid.y_max);
    const long max_iter = cfg.max_iter > 0
                              ? cfg.max_iter
                              : 2 * static_cast<long>(std::ceil(bound / h)) + 100;

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t n_chunks = std::min<std::size_t>(std::max<std::size_t>(1, hw * 4), n);
    const std::size_t chunk = (n + n_chunks - 1) / n_chunks;
    std::vector<double> chunk_res(n_chunks, 0.0);

    for (long it = 0; it < max_iter; ++it) {
        const double* u = gv.u.data();
        double* out = next.data();
        detail::parallel_for(n_chunks, [&](std::size_t ck) {
            const std::size_t lo = ck * chunk;
            const std::size_t hi = std::min(n, lo + chunk);
            double worst = 0.0;
            for (std::size_t node = lo; node < hi; ++node) {
                if (role[node] != Role::update) continue;
                double best = std::numeric_limits<double>::infinity();
                for (int a = 0; a < 2; ++a) {
                    const long b = tab[a].base[node];
                    const double val =
                        b >= 0 ? tab[a].w00[node] * u[b] + tab[a].w10[node] * u[b + 1] +
                                     tab[a].w01[node] * u[b + nx] + tab[a].w11[node] * u[b + nx + 1]
                               : tab[a].ext[node];
                    best = std::min(best, h + val);
                }
                out[node] = best;
                worst = std::max(worst, std::abs(best - u[node]));
            }
            chunk_res[ck] = worst;
        });
        double res = 0.0;
        for (double r : chunk_res) res = std::max(res, r);
        gv.u.swap(next);
        gv.iterations = it + 1;
        gv.residual = res;
        if (res <= cfg.tol) {
            gv.converged = true;
            break;
        }
    }
    return gv;
}

std::vector<double> full_vaccination_grid(const ModelParams& p, const GridSpec& grid,
                                          const IntegratorConfig& cfg) {
    p.validate();
    grid.validate();
    std::vector<double> out(grid.size(), kNaN);
    std::vector<std::size_t> todo;
    todo.reserve(grid.size());
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i)
            if (grid.in_mask(grid.x(i), grid.y(j))) todo.push_back(grid.index(i, j));
    detail::parallel_for(todo.size(), [&](std::size_t k) {
        const std::size_t node = todo[k];
        const int i = static_cast<int>(node % static_cast<std::size_t>(grid.nx));
        const int j = static_cast<int>(node / static_cast<std::size_t>(grid.nx));
        out[node] = full_vaccination_time(p, grid.x(i), grid.y(j), cfg);
    });
    return out;
}

namespace {

// shared upwind stencil; returns false where the stencil leaves the grid
bool upwind_derivatives(const ModelParams& p, const GridValues& gv, int i, int j,
                        double& dx_u, double& dy_u) {
    const GridSpec& g = gv.spec;
    const double x = g.x(i);
    if (i == 0) return false; // s-drift always points left: backward difference
    dx_u = (gv.u[g.index(i, j)] - gv.u[g.index(i - 1, j)]) / g.dx();
    if (p.beta * x <= p.gamma) {
        if (j == 0) return false;
        dy_u = (gv.u[g.index(i, j)] - gv.u[g.index(i, j - 1)]) / g.dy();
    } else {
        if (j == g.ny - 1) return false;
        dy_u = (gv.u[g.index(i, j + 1)] - gv.u[g.index(i, j)]) / g.dy();
    }
    return true;
}

bool stencil_active(const GridValues& gv, int i, int j) {
    const GridSpec& g = gv.spec;
    for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) {
            const int ii = std::clamp(i + di, 0, g.nx - 1);
            const int jj = std::clamp(j + dj, 0, g.ny - 1);
            if (!g.in_mask(g.x(ii), g.y(jj))) return false;
        }
    return true;
}

} // namespace

std::vector<double> hjb_residual(const ModelParams& p, const GridValues& gv) {
    p.validate();
    const GridSpec& g = gv.spec;
    std::vector<double> out(g.size(), kNaN);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double x = g.x(i), y = g.y(j);
            if (j == 0 && p.beta * x <= p.gamma) continue; // target row
            if (!stencil_active(gv, i, j)) continue;
            double dxu, dyu;
            if (!upwind_derivatives(p, gv, i, j, dxu, dyu)) continue;
            out[g.index(i, j)] =
                p.beta * x * y * dxu + x * std::max(dxu, 0.0) + (p.gamma - p.beta * x) * y * dyu - 1.0;
        }
    return out;
}

std::vector<double> obstacle_residual(const ModelParams& p, const GridValues& gv,
                                      const std::vector<double>& u_full) {
    p.validate();
    const GridSpec& g = gv.spec;
    if (u_full.size() != g.size())
        throw std::invalid_argument("obstacle_residual: u_full size mismatch");
    std::vector<double> out(g.size(), kNaN);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double x = g.x(i), y = g.y(j);
            if (j == 0 && p.beta * x <= p.gamma) continue;
            if (!stencil_active(gv, i, j)) continue;
            double dxu, dyu;
            if (!upwind_derivatives(p, gv, i, j, dxu, dyu)) continue;
            const double drift = p.beta * x * y * dxu + (p.gamma - p.beta * x) * y * dyu - 1.0;
            out[g.index(i, j)] = std::max(drift, gv.u[g.index(i, j)] - u_full[g.index(i, j)]);
        }
    return out;
}

} // namespace sire
