#include "sire/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "sire/analysis.hpp"
#include "sire/control.hpp"
#include "sire/io.hpp"
#include "sire/pmp.hpp"

namespace sire {

using nlohmann::json;

void RunConfig::apply_preset() {
    if (preset.empty()) return;
    if (preset == "fig1") {
        params = ModelParams{0.5, 2.0, 1.0};
        x0 = 2.0;
        y0 = 3.0;
    } else if (preset == "fig2") {
        params = ModelParams{2.0, 2.0, 1.0};
        x0 = 2.0;
        y0 = 1.0;
    } else {
        throw std::invalid_argument("unknown preset '" + preset + "' (expected fig1 or fig2)");
    }
}

std::string RunConfig::canonical_text(const std::string& command) const {
    std::map<std::string, std::string> kv;
    kv["command"] = command;
    kv["preset"] = preset;
    kv["beta"] = format_g17(params.beta);
    kv["gamma"] = format_g17(params.gamma);
    kv["mu"] = format_g17(params.mu);
    kv["x0"] = format_g17(x0);
    kv["y0"] = format_g17(y0);
    kv["tau"] = tau ? format_g17(*tau) : "none";
    kv["t_end"] = format_g17(t_end);
    kv["step"] = format_g17(integ.step);
    kv["event_tol"] = format_g17(integ.event_tol);
    kv["max_horizon"] = format_g17(integ.max_horizon);
    kv["n_grid"] = std::to_string(search.n_grid);
    kv["refine_tol"] = format_g17(search.refine_tol);
    kv["boundary_rel_tol"] = format_g17(search.boundary_rel_tol);
    kv["grid.x_min"] = format_g17(grid.x_min);
    kv["grid.x_max"] = format_g17(grid.x_max);
    kv["grid.y_min"] = format_g17(grid.y_min);
    kv["grid.y_max"] = format_g17(grid.y_max);
    kv["grid.nx"] = std::to_string(grid.nx);
    kv["grid.ny"] = std::to_string(grid.ny);
    kv["grid.mask"] = grid.mask == GridSpec::Mask::rectangle ? "rectangle" : "triangle";
    kv["grid.tri_N"] = format_g17(grid.tri_N);
    kv["grid.tri_delta"] = format_g17(grid.tri_delta);
    kv["hjb.h"] = format_g17(hjb.h);
    kv["hjb.tol"] = format_g17(hjb.tol);
    kv["hjb.max_iter"] = std::to_string(hjb.max_iter);
    kv["seed"] = std::to_string(seed);

    std::string out;
    for (const auto& [k, v] : kv) {
        out += k;
        out += '=';
        out += v;
        out += '\n';
    }
    return out;
}

namespace {

json config_json(const RunConfig& cfg, const std::string& command) {
    json j;
    j["command"] = command;
    j["preset"] = cfg.preset;
    j["beta"] = cfg.params.beta;
    j["gamma"] = cfg.params.gamma;
    j["mu"] = cfg.params.mu;
    j["x0"] = cfg.x0;
    j["y0"] = cfg.y0;
    if (cfg.tau)
        j["tau"] = *cfg.tau;
    else
        j["tau"] = nullptr;
    j["t_end"] = cfg.t_end;
    j["step"] = cfg.integ.step;
    j["event_tol"] = cfg.integ.event_tol;
    j["max_horizon"] = cfg.integ.max_horizon;
    j["n_grid"] = cfg.search.n_grid;
    j["refine_tol"] = cfg.search.refine_tol;
    j["boundary_rel_tol"] = cfg.search.boundary_rel_tol;
    j["grid"] = {{"x_min", cfg.grid.x_min}, {"x_max", cfg.grid.x_max},
                 {"y_min", cfg.grid.y_min}, {"y_max", cfg.grid.y_max},
                 {"nx", cfg.grid.nx},       {"ny", cfg.grid.ny}};
    j["seed"] = cfg.seed;
    j["config_sha1"] = sha1_hex(cfg.canonical_text(command));
    return j;
}

void write_json_file(const std::filesystem::path& path, const json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

std::filesystem::path prepare_out_dir(const RunConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    return cfg.out_dir;
}

ControlLaw control_of(const RunConfig& cfg) {
    if (cfg.tau) return make_switching(*cfg.tau);
    return make_constant(0.0);
}

json probe_json(const ProbeReport& r) {
    json j;
    j["name"] = r.name;
    j["sample_count"] = r.sample_count;
    j["worst_violation"] = r.worst_violation;
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass;
    j["witness"] = {{"x", r.witness_x}, {"y", r.witness_y}};
    j["note"] = r.note;
    return j;
}

// hjb_grid.csv rows keyed by quantized coordinates, for cross-checking a
// switch-time classification against an independently solved grid.
struct HjbCsvIndex {
    std::unordered_map<std::uint64_t, double> u_by_node;

    static std::uint64_t key(double x, double y) {
        auto q = [](double v) {
            return static_cast<std::uint64_t>(static_cast<std::int64_t>(std::llround(v * 1e9)));
        };
        return q(x) * 0x9e3779b97f4a7c15ULL ^ q(y);
    }
};

bool load_hjb_csv(const std::filesystem::path& path, HjbCsvIndex& out) {
    std::error_code ec;
    if (!std::filesystem::exists(path, ec)) return false;
    std::istringstream in(read_text_file(path));
    std::string line;
    if (!std::getline(in, line)) return false;
    if (line.rfind("x,y,u,", 0) != 0) return false;
    while (std::getline(in, line)) {
        double x = 0, y = 0, u = 0;
        if (std::sscanf(line.c_str(), "%lg,%lg,%lg", &x, &y, &u) != 3) return false;
        out.u_by_node[HjbCsvIndex::key(x, y)] = u;
    }
    return !out.u_by_node.empty();
}

} // namespace

int cmd_simulate(const RunConfig& cfg) {
    cfg.params.validate();
    auto out = prepare_out_dir(cfg);
    State x0{cfg.x0, cfg.y0};
    x0.validate();

    RunConfig run = cfg;
    double t_end = cfg.t_end > 0 ? cfg.t_end : 2.0 * cfg.params.time_upper_bound(cfg.x0, cfg.y0);
    if (t_end > run.integ.resolved_horizon(run.params, x0)) run.integ.max_horizon = t_end;

    ControlLaw control = control_of(run);
    Trajectory tr = integrate(run.params, control, x0, t_end, run.integ);
    write_text_file(out / "trajectory.csv", trajectory_csv(tr));

    json meta = config_json(cfg, "simulate");
    meta["control"] = cfg.tau ? json{{"type", "switching"}, {"tau", *cfg.tau}}
                              : json{{"type", "constant"}, {"level", 0.0}};
    meta["t_end"] = t_end;
    meta["samples"] = tr.size();
    meta["final"] = {{"t", tr.times.back()},
                     {"S", tr.states.back().s},
                     {"I", tr.states.back().i},
                     {"R", tr.recovered.back()}};
    if (cfg.format == "json") {
        json traj;
        traj["t"] = tr.times;
        json S = json::array(), I = json::array(), r = json::array();
        for (std::size_t k = 0; k < tr.size(); ++k) {
            S.push_back(tr.states[k].s);
            I.push_back(tr.states[k].i);
            r.push_back(tr.control_values[k]);
        }
        traj["S"] = S;
        traj["I"] = I;
        traj["r"] = r;
        write_json_file(out / "trajectory.json", traj);
    }
    write_json_file(out / "trajectory_meta.json", meta);
    std::printf("simulate: %zu samples to t=%s, final I=%s\n", tr.size(),
                format_g17(tr.times.back()).c_str(), format_g17(tr.states.back().i).c_str());
    return kExitOk;
}

int cmd_value(const RunConfig& cfg) {
    cfg.params.validate();
    auto out = prepare_out_dir(cfg);
    ValueResult vr = value_by_switching(cfg.params, cfg.x0, cfg.y0, cfg.integ, cfg.search);

    json j = config_json(cfg, "value");
    j["result"] = {{"u", vr.u},
                   {"tau_star", vr.tau_star},
                   {"u_full", vr.u_full},
                   {"u_never", vr.u_never},
                   {"in_S", vr.in_S},
                   {"n_brackets", vr.n_brackets},
                   {"certificate", vr.certificate}};
    write_json_file(out / "value.json", j);
    std::printf("value: u=%s tau_star=%s in_S=%d\n", format_g17(vr.u).c_str(),
                format_g17(vr.tau_star).c_str(), vr.in_S ? 1 : 0);
    return kExitOk;
}

int cmd_grid(const RunConfig& cfg) {
    cfg.params.validate();
    auto out = prepare_out_dir(cfg);
    GridSpec spec = cfg.grid;
    spec.y_min = cfg.params.mu; // classification grids sit on the threshold
    spec.validate();

    FreeBoundaryMap map = classify_free_boundary(cfg.params, spec, cfg.integ, cfg.search);
    write_text_file(out / "free_boundary.csv", free_boundary_csv(map));

    json meta = config_json(cfg, "grid");
    long n_active = 0, n_in = 0;
    for (std::size_t k = 0; k < map.results.size(); ++k) {
        if (!map.active[k]) continue;
        ++n_active;
        if (map.results[k].in_S) ++n_in;
    }
    meta["nodes"] = {{"active", n_active}, {"immediate_action", n_in}};

    // Cross-check against a previously solved grid in the same directory.
    HjbCsvIndex idx;
    if (load_hjb_csv(out / "hjb_grid.csv", idx)) {
        std::string csv = "x,y,u_switch,u_hjb,abs_diff\n";
        long matched = 0;
        double max_diff = 0.0, sum_diff = 0.0;
        for (int j2 = 0; j2 < spec.ny; ++j2) {
            for (int i = 0; i < spec.nx; ++i) {
                std::size_t k = spec.index(i, j2);
                if (!map.active[k]) continue;
                auto it = idx.u_by_node.find(HjbCsvIndex::key(spec.x(i), spec.y(j2)));
                if (it == idx.u_by_node.end()) continue;
                double d = std::abs(map.results[k].u - it->second);
                ++matched;
                max_diff = std::max(max_diff, d);
                sum_diff += d;
                csv += format_g17(spec.x(i)) + "," + format_g17(spec.y(j2)) + "," +
                       format_g17(map.results[k].u) + "," + format_g17(it->second) + "," +
                       format_g17(d) + "\n";
            }
        }
        if (matched > 0) {
            write_text_file(out / "cross_validation.csv", csv);
            meta["cross_validation"] = {{"matched_nodes", matched},
                                        {"max_abs_diff", max_diff},
                                        {"mean_abs_diff", sum_diff / matched}};
        }
    }
    write_json_file(out / "grid_meta.json", meta);
    std::printf("grid: %ld active nodes, %ld immediate-action\n", n_active, n_in);
    return kExitOk;
}

int cmd_hjb(const RunConfig& cfg) {
    cfg.params.validate();
    auto out = prepare_out_dir(cfg);
    GridSpec spec = cfg.grid;
    spec.y_min = cfg.params.mu;
    spec.validate();

    auto t0 = std::chrono::steady_clock::now();
    GridValues gv = solve_hjb_semilagrangian(cfg.params, spec, cfg.hjb);
    auto t1 = std::chrono::steady_clock::now();
    std::vector<double> u_full = full_vaccination_grid(cfg.params, spec, cfg.integ);
    std::vector<double> res_drift = hjb_residual(cfg.params, gv);
    std::vector<double> res_obst = obstacle_residual(cfg.params, gv, u_full);
    write_text_file(out / "hjb_grid.csv",
                    hjb_grid_csv(cfg.params, gv, res_drift, res_obst, u_full,
                                 cfg.search.boundary_rel_tol));

    double med_drift = 0.0;
    {
        std::vector<double> finite;
        for (double v : res_drift)
            if (std::isfinite(v)) finite.push_back(std::abs(v));
        if (!finite.empty()) {
            std::sort(finite.begin(), finite.end());
            med_drift = finite[finite.size() / 2];
        }
    }

    json meta = config_json(cfg, "hjb");
    meta["solve"] = {{"iterations", gv.iterations},
                     {"sup_update", gv.residual},
                     {"converged", gv.converged},
                     {"pseudo_step", gv.h},
                     {"median_abs_pde_residual", med_drift},
                     {"wall_time_s", std::chrono::duration<double>(t1 - t0).count()}};
    write_json_file(out / "hjb_summary.json", meta);
    std::printf("hjb: %ld iterations, sup update %s, median PDE residual %s\n", gv.iterations,
                format_g17(gv.residual).c_str(), format_g17(med_drift).c_str());
    return gv.converged ? kExitOk : kExitNumericalFailure;
}

int cmd_pmp(const RunConfig& cfg) {
    cfg.params.validate();
    auto out = prepare_out_dir(cfg);

    double tau = 0.0;
    json j = config_json(cfg, "pmp");
    if (cfg.tau) {
        tau = *cfg.tau;
        j["tau_source"] = "explicit";
    } else {
        ValueResult vr = value_by_switching(cfg.params, cfg.x0, cfg.y0, cfg.integ, cfg.search);
        tau = vr.tau_star;
        j["tau_source"] = "optimized";
        j["value"] = {{"u", vr.u}, {"tau_star", vr.tau_star}, {"certificate", vr.certificate}};
    }

    NecessaryConditionsReport rep =
        check_necessary_conditions(cfg.params, tau, cfg.x0, cfg.y0, cfg.integ);
    double dual = duality_defect(cfg.params, tau, cfg.x0, cfg.y0, cfg.integ);

    j["report"] = {{"residual_ode", rep.residual_ode},
                   {"p_terminal", rep.p_terminal},
                   {"q_terminal_identity", rep.q_terminal_identity},
                   {"cond3_sup", rep.cond3_sup},
                   {"cond4_sup", rep.cond4_sup},
                   {"duality_defect", dual},
                   {"u", rep.u},
                   {"tau", rep.tau},
                   {"pass", rep.pass}};
    j["tolerances"] = {{"ode", rep.tol_ode},
                       {"terminal", rep.tol_terminal},
                       {"cond3", rep.tol_cond3},
                       {"cond4", rep.tol_cond4}};
    write_json_file(out / "pmp_report.json", j);
    std::printf("pmp: tau=%s cond4_sup=%s pass=%d\n", format_g17(tau).c_str(),
                format_g17(rep.cond4_sup).c_str(), rep.pass ? 1 : 0);
    return rep.pass ? kExitOk : kExitProbeFailure;
}

int cmd_verify(const RunConfig& cfg) {
    cfg.params.validate();
    auto out = prepare_out_dir(cfg);
    std::vector<ProbeReport> probes = run_default_probes(cfg.params, cfg.seed, cfg.integ, cfg.search);

    json j;
    j["command"] = "verify";
    j["config_sha1"] = sha1_hex(cfg.canonical_text("verify"));
    j["beta"] = cfg.params.beta;
    j["gamma"] = cfg.params.gamma;
    j["mu"] = cfg.params.mu;
    j["seed"] = cfg.seed;
    json arr = json::array();
    bool all_pass = true;
    for (const auto& r : probes) {
        arr.push_back(probe_json(r));
        all_pass = all_pass && r.pass;
        std::printf("%-24s %s  worst=%s tol=%s n=%ld\n", r.name.c_str(),
                    r.pass ? "PASS" : "FAIL", format_g17(r.worst_violation).c_str(),
                    format_g17(r.tolerance).c_str(), r.sample_count);
    }
    j["probes"] = arr;
    j["all_pass"] = all_pass;
    write_json_file(out / "verify_report.json", j);
    std::printf("verify: %s\n", all_pass ? "all probes pass" : "probe failures");
    return all_pass ? kExitOk : kExitProbeFailure;
}

int dispatch(int (*cmd)(const RunConfig&), const RunConfig& cfg) {
    try {
        return cmd(cfg);
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kExitNumericalFailure;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "invalid configuration: %s\n", e.what());
        return kExitBadConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumericalFailure;
    }
}

} // namespace sire
