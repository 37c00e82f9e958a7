#include <doctest.h>

#include <cmath>

#include "sire/analysis.hpp"
#include "sire/control.hpp"

using namespace sire;

namespace {
const ModelParams kFig1{0.5, 2.0, 1.0};
const ModelParams kFig2{2.0, 2.0, 1.0};
} // namespace

TEST_SUITE_BEGIN("analysis");

TEST_CASE("low-discrepancy samples are deterministic and cover the box") {
    Box box{0.5, 2.5, 1.0, 3.0};
    auto a = low_discrepancy_box(64, box);
    auto b = low_discrepancy_box(64, box);
    REQUIRE(a.size() == 64);
    CHECK(a == b);
    double x_lo = 1e9, x_hi = -1e9, y_lo = 1e9, y_hi = -1e9;
    for (auto [x, y] : a) {
        CHECK(x >= box.x_min);
        CHECK(x <= box.x_max);
        CHECK(y >= box.y_min);
        CHECK(y <= box.y_max);
        x_lo = std::min(x_lo, x);
        x_hi = std::max(x_hi, x);
        y_lo = std::min(y_lo, y);
        y_hi = std::max(y_hi, y);
    }
    // even coverage: samples reach well into every quarter of each axis
    CHECK(x_lo < box.x_min + 0.25 * (box.x_max - box.x_min));
    CHECK(x_hi > box.x_max - 0.25 * (box.x_max - box.x_min));
    CHECK(y_lo < box.y_min + 0.25 * (box.y_max - box.y_min));
    CHECK(y_hi > box.y_max - 0.25 * (box.y_max - box.y_min));
}

TEST_CASE("analytic sandwich holds on a sample set") {
    ProbeReport r = check_bounds(kFig1, Box{0.0, 4.0, 1.0, 4.0}, 100, {}, {});
    CHECK(r.pass);
    CHECK(r.worst_violation <= 1e-8);
    CHECK(r.sample_count == 100);
}

TEST_CASE("terminal slope margin holds for varied controls") {
    ProbeReport r = terminal_slope_probe(kFig1, Box{0.0, 4.0, 1.0, 4.0}, 10, 11, {});
    CHECK(r.pass);
    CHECK(r.sample_count >= 30); // three control families per sample point
}

TEST_CASE("dynamic programming consistency at the reference state") {
    ProbeReport r = dpp_residual(kFig1, 2.0, 3.0, {0.1, 0.3, 0.5, 0.7, 0.9}, {}, {});
    CHECK(r.pass);
    CHECK(r.worst_violation <= r.tolerance);
}

TEST_CASE("no random control beats the optimized switch") {
    ProbeReport r = dominance_vs_random_controls(kFig1, 2.0, 3.0, 50, 123, {}, {});
    CHECK(r.pass);
    CHECK(r.sample_count == 50);
}

TEST_CASE("curvature probe is exact on an injected quadratic") {
    auto f = [](double x, double y) { return x * x + y * y; };
    ProbeReport r = semiconcavity_probe(f, kFig1, 4.0, 0.1, 16, 4, 1e-2, 5e-3);
    CHECK(r.pass);
    // centered second difference of |z|^2 along a unit direction is exactly 2
    CHECK(r.note.find("L(h1)=2") != std::string::npos);
    CHECK(r.note.find("L(h2)=2") != std::string::npos);
}

TEST_CASE("curvature probe flags scale-unstable inputs") {
    // oscillation faster than both probe widths: the filtered curvature
    // 2(1-cos(kh))/h^2 differs by ~50% between the widths
    auto f = [](double x, double) { return std::sin(300.0 * x); };
    ProbeReport r = semiconcavity_probe(f, kFig1, 4.0, 0.1, 64, 2, 1e-2, 5e-3);
    CHECK_FALSE(r.pass);
}

TEST_CASE("value curvature is stable between probe widths") {
    ProbeReport r = semiconcavity_probe(
        [](double x, double y) {
            SearchConfig fast;
            fast.n_grid = 256;
            return value_by_switching(kFig1, x, y, {}, fast).u;
        },
        kFig1, 4.0, 0.1, 12, 2, 1e-2, 5e-3);
    CHECK(r.pass);
}

TEST_CASE("empirical steepness stabilizes under sample doubling") {
    ProbeReport r = estimate_lipschitz(kFig1, 4.0, 0.1, 80, {}, {});
    CHECK(r.pass);
    CHECK(r.worst_violation <= r.tolerance);
}

TEST_CASE("long-horizon state is past the epidemic") {
    CHECK(asymptotics_check(kFig1, make_constant(0.0), 2.0, 3.0, 10.0, {}).pass);
    CHECK(asymptotics_check(kFig2, make_constant(0.0), 2.0, 1.0, 10.0, {}).pass);
    CHECK(asymptotics_check(kFig1, make_constant(0.0), 0.0, 2.0, 10.0, {}).pass);
}

TEST_CASE("gradient sign profile across the classified map") {
    GridSpec spec{0.0, 4.0, 1.0, 4.0, 15, 15};
    SearchConfig fast;
    fast.n_grid = 128;
    FreeBoundaryMap map = classify_free_boundary(kFig1, spec, {}, fast);
    ProbeReport r = sign_profile_free_boundary(kFig1, map);
    CHECK(r.pass);
    CHECK(r.sample_count > 100);
}

TEST_CASE("default battery passes and is reproducible") {
    auto a = run_default_probes(kFig1, 7, {}, {});
    auto b = run_default_probes(kFig1, 7, {}, {});
    REQUIRE(a.size() == b.size());
    REQUIRE(a.size() >= 6);
    for (std::size_t k = 0; k < a.size(); ++k) {
        CAPTURE(a[k].name);
        CHECK(a[k].pass);
        CHECK(a[k].name == b[k].name);
        CHECK(a[k].worst_violation == b[k].worst_violation);
        CHECK(a[k].sample_count == b[k].sample_count);
        CHECK(a[k].witness_x == b[k].witness_x);
        CHECK(a[k].witness_y == b[k].witness_y);
    }
}

TEST_SUITE_END();
