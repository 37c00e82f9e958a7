#pragma once

#include <vector>

#include "sire/dynamics.hpp"
#include "sire/grid.hpp"

namespace sire {

struct HjbConfig {
    double h = 0.0;     // pseudo-time step; 0 => 0.5 * min(dx,dy) / max |f|
    double tol = 1e-10; // sup-norm update threshold for convergence
    long max_iter = 0;  // 0 => 2 * ceil(value bound / h) + 100

    void validate() const;
};

// Solved grid.  u is row-major with the bottom row on the threshold; target
// nodes (y = mu, beta x <= gamma) are clamped to zero.
struct GridValues {
    GridSpec spec;
    std::vector<double> u;
    long iterations = 0;
    double residual = 0.0;
    bool converged = false;
    double h = 0.0;

    double bilinear(double x, double y) const;
};

// Value iteration for the dynamic-programming fixed point
//   U(node) = min_{a in {0,1}} { h + Interp(U)(node + h f(node, a)) },
// initialized at the analytic upper bound (x+y)/(mu*gamma), which makes the
// iterates non-increasing.  Feet of characteristics leaving the rectangle use
// the upper bound as exterior extension, except through the target edge
// where the extension is zero.  Each sweep is a Jacobi-style map over nodes;
// results do not depend on the worker count.
GridValues solve_hjb_semilagrangian(const ModelParams& p, const GridSpec& grid,
                                    const HjbConfig& cfg = {});

// Immediate-full-effort eradication time per node (parallel map).
std::vector<double> full_vaccination_grid(const ModelParams& p, const GridSpec& grid,
                                          const IntegratorConfig& cfg = {});

// Upwind finite-difference defect of the stationary equation
//   beta x y u_x + x (u_x)^+ + (gamma - beta x) y u_y = 1.
// NaN marks nodes where the upwind stencil leaves the grid (target row,
// inflow columns, masked nodes).
std::vector<double> hjb_residual(const ModelParams& p, const GridValues& gv);

// Defect of the obstacle form max{ drift - 1, u - u_full } = 0, pairing the
// no-effort drift residual with the immediate-effort obstacle.
std::vector<double> obstacle_residual(const ModelParams& p, const GridValues& gv,
                                      const std::vector<double>& u_full);

} // namespace sire
