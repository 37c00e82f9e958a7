// Acceptance battery: one line per criterion, nonzero exit if any fails.
// Tolerances are fixed here and intentionally not configurable.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "reference_values.hpp"
#include "sire/analysis.hpp"
#include "sire/cli.hpp"
#include "sire/control.hpp"
#include "sire/hjb.hpp"
#include "sire/io.hpp"
#include "sire/pmp.hpp"
#include "sire/value.hpp"

using namespace sire;

namespace {

const ModelParams kFig1{0.5, 2.0, 1.0};
const ModelParams kFig2{2.0, 2.0, 1.0};

int g_failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail = "") {
    std::printf("CRITERION %02d %s  %s%s%s\n", id, pass ? "PASS" : "FAIL", what.c_str(),
                detail.empty() ? "" : "  -- ", detail.c_str());
    if (!pass) ++g_failures;
    std::fflush(stdout);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

// 1: qualitative reproduction of the two reference scenarios
void criterion_figures() {
    IntegratorConfig cfg;
    cfg.step = 2e-4;

    Trajectory tr1 = integrate(kFig1, make_constant(0.0), {2.0, 3.0}, 3.0, cfg);
    bool decreasing = true;
    for (std::size_t k = 0; k < tr1.size(); ++k) {
        State d = vector_field(kFig1, tr1.states[k], 0.0);
        if (!(d.i < 0.0)) decreasing = false;
    }

    Trajectory tr2 = integrate(kFig2, make_constant(0.0), {2.0, 1.0}, 2.0, cfg);
    int peaks = 0;
    std::size_t argmax = 0;
    for (std::size_t k = 1; k + 1 < tr2.size(); ++k) {
        if (tr2.states[k].i > tr2.states[argmax].i) argmax = k;
        if (tr2.states[k].i > tr2.states[k - 1].i && tr2.states[k + 1].i < tr2.states[k].i)
            ++peaks;
    }
    double line_gap = std::abs(kFig2.beta * tr2.states[argmax].s - kFig2.gamma);
    bool one_peak = peaks == 1 && argmax > 0 && argmax + 1 < tr2.size() && line_gap <= 1e-3;

    report(1, decreasing && one_peak,
           "reference trajectories: monotone decline and single interior peak on the critical line",
           "peaks=" + std::to_string(peaks) + " |beta*S-gamma|@peak=" + fmt(line_gap));
}

void criterion_closed_form() {
    double worst = 0.0;
    for (double gamma : {0.5, 2.0}) {
        ModelParams p{0.5, gamma, 1.0};
        for (double y : {1.5, 2.0, 10.0}) {
            double u = eradication_time(p, make_constant(0.0), 0.0, y, {});
            worst = std::max(worst, std::abs(u - std::log(y) / gamma));
        }
    }
    report(2, worst <= 1e-6, "no-susceptible closed form ln(y/mu)/gamma across y and gamma",
           "worst=" + fmt(worst));
}

void criterion_bounds() {
    ProbeReport r = check_bounds(kFig1, Box{0.0, 4.0, 1.0, 4.0}, 500, {}, {});
    report(3, r.pass && r.worst_violation <= 1e-8,
           "analytic sandwich on 500 low-discrepancy states", "worst=" + fmt(r.worst_violation));
}

void criterion_terminal_slope() {
    ProbeReport a = terminal_slope_probe(kFig1, Box{0.0, 4.0, 1.0, 4.0}, 40, 2026, {});
    ProbeReport b = terminal_slope_probe(kFig2, Box{0.0, 4.0, 1.0, 4.0}, 20, 2027, {});
    report(4, a.pass && b.pass, "terminal slope margin beta*S(u) < gamma - 1e-6 at every eradication",
           "worst=" + fmt(std::max(a.worst_violation, b.worst_violation)));
}

void criterion_oracle_value() {
    double worst = 0.0;
    for (const auto& rv : frozen::kRefValues) {
        ValueResult r = value_by_switching({rv.beta, rv.gamma, rv.mu}, rv.x, rv.y, {}, {});
        worst = std::max(worst, std::abs(r.u - rv.u));
    }
    report(5, worst <= 1e-5,
           "switch-time optimizer matches the frozen dense-scan oracle at 10 states",
           "worst=" + fmt(worst));
}

void criterion_hjb() {
    auto probes = low_discrepancy_box(100, Box{0.3, 3.5, 1.15, 3.8});
    std::vector<double> refs(probes.size());
    for (std::size_t k = 0; k < probes.size(); ++k)
        refs[k] = value_by_switching(kFig1, probes[k].first, probes[k].second, {}, {}).u;

    double errs[3] = {0, 0, 0};
    int sizes[3] = {101, 201, 401};
    for (int m = 0; m < 3; ++m) {
        GridSpec spec{0.01, 4.0, 1.0, 4.0, sizes[m], sizes[m]};
        GridValues gv = solve_hjb_semilagrangian(kFig1, spec, {});
        double worst = 0.0;
        for (std::size_t k = 0; k < probes.size(); ++k) {
            double rel = std::abs(gv.bilinear(probes[k].first, probes[k].second) - refs[k]) /
                         std::max(refs[k], 1e-12);
            worst = std::max(worst, rel);
        }
        errs[m] = worst;
    }
    bool pass = errs[2] <= 0.02 && errs[0] > errs[1] && errs[1] > errs[2];
    report(6, pass, "grid solver converges onto trajectory values across three refinements",
           "rel sup err " + fmt(errs[0]) + " -> " + fmt(errs[1]) + " -> " + fmt(errs[2]));
}

void criterion_pmp() {
    ValueResult vr = value_by_switching(kFig1, 2.0, 3.0, {}, {});
    NecessaryConditionsReport rep = check_necessary_conditions(kFig1, vr.tau_star, 2.0, 3.0, {});
    bool pass = rep.residual_ode <= 1e-6 && rep.p_terminal <= 1e-6 &&
                rep.q_terminal_identity <= 1e-6 && rep.cond3_sup <= 1e-6 && rep.cond4_sup <= 1e-4;
    report(7, pass, "necessary conditions on the certified-optimal reference instance",
           "ode=" + fmt(rep.residual_ode) + " P(u)=" + fmt(rep.p_terminal) +
               " Qterm=" + fmt(rep.q_terminal_identity) + " feedback=" + fmt(rep.cond3_sup) +
               " hamiltonian=" + fmt(rep.cond4_sup));
}

void criterion_duality() {
    ValueResult vr = value_by_switching(kFig1, 2.0, 3.0, {}, {});
    double defect = duality_defect(kFig1, vr.tau_star, 2.0, 3.0, {});
    report(8, defect <= 1e-5, "sensitivity-adjoint pairing constant along the optimal path",
           "sup defect=" + fmt(defect));
}

void criterion_dominance() {
    struct Pt {
        ModelParams p;
        double x, y;
    } pts[] = {
        {kFig1, 2.0, 3.0}, {kFig1, 1.0, 1.5}, {kFig1, 3.0, 1.2},
        {kFig2, 2.0, 1.5}, {kFig2, 3.0, 3.0},
    };
    bool pass = true;
    double worst = -1e300;
    int seed = 9000;
    for (const auto& pt : pts) {
        ProbeReport r = dominance_vs_random_controls(pt.p, pt.x, pt.y, 200, seed++, {}, {});
        pass = pass && r.pass;
        worst = std::max(worst, r.worst_violation);
    }
    report(9, pass, "1000 seeded controls never beat the optimized switch by more than 1e-6",
           "worst margin=" + fmt(worst));
}

void criterion_semiconcavity() {
    ProbeReport r = semiconcavity_probe(
        [](double x, double y) { return value_by_switching(kFig1, x, y, {}, {}).u; }, kFig1, 4.0,
        0.1, 40, 4, 1e-2, 5e-3);
    report(10, r.pass, "upper curvature estimate finite and stable across probe widths", r.note);
}

void criterion_gradients() {
    struct Pt {
        ModelParams p;
        double x, y;
    } pts[] = {
        {kFig1, 2.0, 3.0}, {kFig1, 1.0, 1.5}, {kFig1, 3.0, 1.6}, {kFig1, 0.7, 2.4},
        {kFig1, 3.6, 3.2}, {kFig2, 2.0, 1.5}, {kFig2, 0.8, 2.0}, {kFig2, 3.0, 3.0},
        {kFig2, 1.2, 3.3}, {kFig2, 2.6, 2.2},
    };
    double worst_fd = 0.0;
    IntegratorConfig cfg;
    for (const auto& pt : pts) {
        ControlLaw c = make_switching(0.0);
        EradicationGradient g = gradient_eradication_time(pt.p, c, pt.x, pt.y, cfg);
        double h = 1e-5;
        double fdx = (eradication_time(pt.p, c, pt.x + h, pt.y, cfg) -
                      eradication_time(pt.p, c, pt.x - h, pt.y, cfg)) /
                     (2 * h);
        double fdy = (eradication_time(pt.p, c, pt.x, pt.y + h, cfg) -
                      eradication_time(pt.p, c, pt.x, pt.y - h, cfg)) /
                     (2 * h);
        worst_fd = std::max({worst_fd, std::abs(g.du_dx - fdx) / (1.0 + std::abs(fdx)),
                             std::abs(g.du_dy - fdy) / (1.0 + std::abs(fdy))});
    }

    // threshold edge: the interior gradient extends continuously onto y = mu
    // with du/dx -> 0 and du/dy -> 1/((gamma - beta x) mu); the sign is fixed
    // by the positive one-sided difference quotient of u >= 0 leaving the edge
    double worst_edge = 0.0;
    for (double x : {1.0, 2.0, 3.0}) {
        double expected = 1.0 / ((kFig1.gamma - kFig1.beta * x) * kFig1.mu);
        EradicationGradient gi =
            gradient_eradication_time(kFig1, make_constant(0.0), x, 1.0 + 1e-6, {});
        worst_edge = std::max({worst_edge, std::abs(gi.du_dy - expected), std::abs(gi.du_dx)});
        EradicationGradient gb = gradient_eradication_time(kFig1, make_constant(0.0), x, 1.0, {});
        worst_edge = std::max({worst_edge, std::abs(gb.du_dy - expected), std::abs(gb.du_dx)});
    }
    bool pass = worst_fd <= 1e-5 && worst_edge <= 1e-4;
    report(11, pass, "flow-sensitivity gradients: finite-difference match and threshold-edge limit",
           "fd=" + fmt(worst_fd) + " edge=" + fmt(worst_edge));
}

void criterion_determinism() {
    namespace fs = std::filesystem;
    RunConfig cfg;
    cfg.params = kFig1;
    cfg.seed = 7;
    fs::path base = fs::temp_directory_path() / "sire_acceptance_verify";
    fs::remove_all(base);
    fs::path da = base / "a", db = base / "b";

    cfg.out_dir = da;
    int rc_a = cmd_verify(cfg);
    cfg.out_dir = db;
    int rc_b = cmd_verify(cfg);

    std::string a = read_text_file(da / "verify_report.json");
    std::string b = read_text_file(db / "verify_report.json");
    bool pass = rc_a == 0 && rc_b == 0 && !a.empty() && a == b;
    report(12, pass, "verification command is reproducible byte-for-byte",
           "bytes=" + std::to_string(a.size()));
}

} // namespace

int main() {
    std::printf("acceptance: eradication-time control suite\n");
    criterion_figures();
    criterion_closed_form();
    criterion_bounds();
    criterion_terminal_slope();
    criterion_oracle_value();
    criterion_hjb();
    criterion_pmp();
    criterion_duality();
    criterion_dominance();
    criterion_semiconcavity();
    criterion_gradients();
    criterion_determinism();
    if (g_failures == 0)
        std::printf("acceptance: all 12 criteria pass\n");
    else
        std::printf("acceptance: %d criteria FAILED\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
