#pragma once

#include <vector>

#include "sire/eradication.hpp"
#include "sire/grid.hpp"

namespace sire {

struct SearchConfig {
    int n_grid = 512;               // uniform switch-time scan nodes on [0, u_never]
    double refine_tol = 1e-8;       // golden-section interval tolerance
    double boundary_rel_tol = 1e-6; // immediate-action set test: |u - u_full| <= tol*(1+u)

    void validate() const;
};

// Outcome of the switch-time optimization at one state.
struct ValueResult {
    double u = 0.0;        // optimal eradication time
    double tau_star = 0.0; // earliest switch time attaining u
    double u_full = 0.0;   // immediate full effort (switch at 0)
    double u_never = 0.0;  // no vaccination at all
    bool in_S = false;     // immediate action optimal: |u - u_full| within tolerance
    int n_brackets = 1;    // near-optimal scan minima (diagnostic; >1 flags ambiguity)
    double certificate = 0.0; // g(tau_star) - u, bounded by the classification tolerance
};

struct FreeBoundaryMap {
    GridSpec spec;
    std::vector<ValueResult> results; // row-major, results[j*nx + i]
    std::vector<char> active;         // mask membership per node
};

// Eradication time under immediate full vaccination.  States already at or
// below the threshold with beta*x <= gamma resolve to 0.
double full_vaccination_time(const ModelParams& p, double x, double y,
                             const IntegratorConfig& cfg = {});

// Optimal eradication time over delayed-switch controls:
//   u(x,y) = min_tau { tau + full effort time from the uncontrolled state at tau },
// minimized by a uniform scan on [0, u_never] plus golden-section refinement.
// tau_star is the first scan time attaining the minimum within tolerance.
ValueResult value_by_switching(const ModelParams& p, double x, double y,
                               const IntegratorConfig& cfg = {}, const SearchConfig& search = {});

// Earliest switch time attaining the optimum (first attainment, which can be
// smaller than the argmin returned by a global scan).
double tau_star(const ModelParams& p, double x, double y,
                const IntegratorConfig& cfg = {}, const SearchConfig& search = {});

// Per-node switch-time optimization over a grid; parallel over nodes with
// deterministic output ordering.
FreeBoundaryMap classify_free_boundary(const ModelParams& p, const GridSpec& grid,
                                       const IntegratorConfig& cfg = {},
                                       const SearchConfig& search = {});

} // namespace sire
