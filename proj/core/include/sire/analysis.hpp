#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "sire/value.hpp"

namespace sire {

// Uniform convention: pass <=> worst_violation <= tolerance.
struct ProbeReport {
    std::string name;
    long sample_count = 0;
    double worst_violation = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    double witness_x = 0.0;
    double witness_y = 0.0;
    std::string note;
};

struct Box {
    double x_min = 0.0;
    double x_max = 4.0;
    double y_min = 1.0;
    double y_max = 4.0;
};

// Deterministic low-discrepancy points (additive Kronecker sequence on the
// plastic-number lattice), mapped into the box.
std::vector<std::pair<double, double>> low_discrepancy_box(int n, const Box& box);

// Analytic envelope: log-growth lower bound <= u <= (x+y)/(mu*gamma), and
// u never exceeds the single-control times it is a minimum over.
ProbeReport check_bounds(const ModelParams& p, const Box& box, int n_samples,
                         const IntegratorConfig& cfg = {}, const SearchConfig& search = {});

// Terminal transversality margin: beta S(u) stays below gamma - 1e-6 at every
// sampled eradication (no-effort, full-effort, and seeded random controls).
ProbeReport terminal_slope_probe(const ModelParams& p, const Box& box, int n_samples,
                                 std::uint64_t seed, const IntegratorConfig& cfg = {});

// Dynamic-programming consistency at one state: at each fraction of u the
// optimal candidate reproduces u and no candidate improves on it.
ProbeReport dpp_residual(const ModelParams& p, double x, double y,
                         const std::vector<double>& t_fractions,
                         const IntegratorConfig& cfg = {}, const SearchConfig& search = {});

// No seeded random control eradicates faster than the optimized value.
ProbeReport dominance_vs_random_controls(const ModelParams& p, double x, double y, int n_controls,
                                         std::uint64_t seed, const IntegratorConfig& cfg = {},
                                         const SearchConfig& search = {});

// One-sided curvature estimate on the triangle {x >= delta, y >= mu + delta,
// x + y <= N}: the largest centered second difference of f must be stable
// between the two probe widths.  f is injectable so the probe itself can be
// calibrated against known functions.
ProbeReport semiconcavity_probe(const std::function<double(double, double)>& f,
                                const ModelParams& p, double tri_N, double tri_delta,
                                int n_points, int n_dirs, double h1, double h2,
                                double stability_rel_tol = 0.2);

// Empirical Lipschitz constant of the value on the triangle; reported stable
// if doubling the sample set grows it by no more than 25%.
ProbeReport estimate_lipschitz(const ModelParams& p, double tri_N, double tri_delta, int n_samples,
                               const IntegratorConfig& cfg = {}, const SearchConfig& search = {});

// Long-horizon decay: at horizon_mult times the value bound, infections sit
// far below the threshold and the susceptible pool is subcritical.
ProbeReport asymptotics_check(const ModelParams& p, const ControlLaw& c, double x, double y,
                              double horizon_mult = 10.0, const IntegratorConfig& cfg = {});

// Monotonicity signature across a classified map: du/dx >= 0 deep inside the
// immediate-action set, <= 0 deep in its complement (one-cell exclusion band
// around the boundary, relative tolerance 1e-4).
ProbeReport sign_profile_free_boundary(const ModelParams& p, const FreeBoundaryMap& map);

// The battery behind the verify command: bounds, terminal slope, DPP,
// dominance, semiconcavity, and sign profile at reproducible settings.
std::vector<ProbeReport> run_default_probes(const ModelParams& p, std::uint64_t seed,
                                            const IntegratorConfig& cfg = {},
                                            const SearchConfig& search = {});

} // namespace sire
