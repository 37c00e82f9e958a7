// Command-line front end: eradication-time simulation, switch-time
// optimization, free-boundary classification, grid solves, optimality
// diagnostics, and the self-check battery.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sire/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"sire: optimal vaccination timing for threshold eradication"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "key=value configuration file (flags win)");

    sire::RunConfig cfg;
    double tau_val = 0.0;
    std::vector<int> grid_dims;
    std::vector<double> domain;

    auto* o_beta = app.add_option("--beta", cfg.params.beta, "transmission rate")
                       ->envname("SIRE_BETA");
    auto* o_gamma = app.add_option("--gamma", cfg.params.gamma, "recovery rate")
                        ->envname("SIRE_GAMMA");
    auto* o_mu = app.add_option("--mu", cfg.params.mu, "eradication threshold")
                     ->envname("SIRE_MU");
    auto* o_x0 = app.add_option("--x0", cfg.x0, "initial susceptible mass")->envname("SIRE_X0");
    auto* o_y0 = app.add_option("--y0", cfg.y0, "initial infected mass")->envname("SIRE_Y0");
    auto* o_tau = app.add_option("--tau", tau_val, "switch time: no effort before, full after")
                      ->envname("SIRE_TAU");
    app.add_option("--step", cfg.integ.step, "maximum RK4 step")->envname("SIRE_STEP");
    app.add_option("--n-grid", cfg.search.n_grid, "switch-time scan nodes")
        ->envname("SIRE_N_GRID");
    app.add_option("--grid", grid_dims, "grid dimensions NX,NY")
        ->delimiter(',')
        ->expected(0, 2)
        ->envname("SIRE_GRID");
    app.add_option("--domain", domain, "grid domain XMIN,XMAX,YMAX (y starts at mu)")
        ->delimiter(',')
        ->expected(0, 3)
        ->envname("SIRE_DOMAIN");
    app.add_option("--seed", cfg.seed, "seed for randomized probes")->envname("SIRE_SEED");
    app.add_option("--out", cfg.out_dir, "output directory")->envname("SIRE_OUT");
    app.add_option("--format", cfg.format, "csv or json payloads")
        ->check(CLI::IsMember({"csv", "json"}))
        ->envname("SIRE_FORMAT");
    app.add_option("--preset", cfg.preset, "reference scenario (fig1 or fig2)")
        ->check(CLI::IsMember({"fig1", "fig2"}))
        ->envname("SIRE_PRESET");

    auto* sim = app.add_subcommand("simulate", "integrate one trajectory and write it out");
    sim->add_option("--t-end", cfg.t_end, "horizon; 0 picks twice the value bound");
    auto* val = app.add_subcommand("value", "optimal switch time and eradication time at a state");
    auto* grd = app.add_subcommand("grid", "classify the immediate-action set over a grid");
    auto* hjb = app.add_subcommand("hjb", "solve the stationary equation on a grid");
    auto* pmp = app.add_subcommand("pmp", "check optimality conditions along a trajectory");
    auto* ver = app.add_subcommand("verify", "run the structural probe battery");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return sire::kExitBadConfig;
    }

    try {
        // Presets fill params and state; explicit flags override them.
        if (!cfg.preset.empty()) {
            double beta = cfg.params.beta, gamma = cfg.params.gamma, mu = cfg.params.mu;
            double x0 = cfg.x0, y0 = cfg.y0;
            cfg.apply_preset();
            if (o_beta->count()) cfg.params.beta = beta;
            if (o_gamma->count()) cfg.params.gamma = gamma;
            if (o_mu->count()) cfg.params.mu = mu;
            if (o_x0->count()) cfg.x0 = x0;
            if (o_y0->count()) cfg.y0 = y0;
        }
        if (o_tau->count()) cfg.tau = tau_val;
        if (!grid_dims.empty()) {
            if (grid_dims.size() != 2) throw std::invalid_argument("--grid expects NX,NY");
            cfg.grid.nx = grid_dims[0];
            cfg.grid.ny = grid_dims[1];
        }
        if (!domain.empty()) {
            if (domain.size() != 3)
                throw std::invalid_argument("--domain expects XMIN,XMAX,YMAX");
            cfg.grid.x_min = domain[0];
            cfg.grid.x_max = domain[1];
            cfg.grid.y_max = domain[2];
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "invalid configuration: %s\n", e.what());
        return sire::kExitBadConfig;
    }

    if (sim->parsed()) return sire::dispatch(sire::cmd_simulate, cfg);
    if (val->parsed()) return sire::dispatch(sire::cmd_value, cfg);
    if (grd->parsed()) return sire::dispatch(sire::cmd_grid, cfg);
    if (hjb->parsed()) return sire::dispatch(sire::cmd_hjb, cfg);
    if (pmp->parsed()) return sire::dispatch(sire::cmd_pmp, cfg);
    if (ver->parsed()) return sire::dispatch(sire::cmd_verify, cfg);
    return sire::kExitBadConfig;
}
