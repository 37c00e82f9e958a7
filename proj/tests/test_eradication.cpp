#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "reference_values.hpp"
#include "sire/control.hpp"
#include "sire/eradication.hpp"

using namespace sire;

namespace {

const ModelParams kFig1{0.5, 2.0, 1.0};

// central finite differences of the eradication time, for gradient checks
EradicationGradient fd_gradient(const ModelParams& p, const ControlLaw& c, double x, double y,
                                double h) {
    IntegratorConfig cfg;
    EradicationGradient g;
    g.du_dx = (eradication_time(p, c, x + h, y, cfg) - eradication_time(p, c, x - h, y, cfg)) /
              (2.0 * h);
    g.du_dy = (eradication_time(p, c, x, y + h, cfg) - eradication_time(p, c, x, y - h, cfg)) /
              (2.0 * h);
    return g;
}

} // namespace

TEST_SUITE_BEGIN("eradication");

TEST_CASE("closed forms and reference eradication times") {
    ModelParams p{0.5, 1.0, 1.0};
    double u = eradication_time(p, make_constant(0.0), 0.0, std::exp(1.0), {});
    CHECK(std::abs(u - 1.0) < 1e-9);

    CHECK(eradication_time(kFig1, make_constant(0.7), 2.0, 1.0, {}) == 0.0);

    double t1 = eradication_time(kFig1, make_switching(0.0), 2.0, 3.0, {});
    CHECK(std::abs(t1 - frozen::kFullEffortTime) < 1e-6);
    double t0 = eradication_time(kFig1, make_constant(0.0), 2.0, 3.0, {});
    CHECK(std::abs(t0 - frozen::kNoEffortTime) < 1e-6);
}

TEST_CASE("eradication times respect the mass upper bound") {
    for (const auto& rv : frozen::kRefValues) {
        ModelParams p{rv.beta, rv.gamma, rv.mu};
        double bound = p.time_upper_bound(rv.x, rv.y);
        for (int seed = 0; seed < 5; ++seed) {
            ControlLaw c = random_piecewise(100 + seed, 3, bound);
            double u = eradication_time(p, c, rv.x, rv.y, {});
            CHECK(u >= 0.0);
            CHECK(u <= bound);
        }
    }
}

TEST_CASE("sensitivities start at the identity and stay nonsingular") {
    SensitivityPath sp = flow_sensitivities(kFig1, make_switching(0.3), {2.0, 3.0}, 0.0, {});
    CHECK(sp.Z.front().dxs == 1.0);
    CHECK(sp.Z.front().dys == 0.0);
    CHECK(sp.Z.front().dxi == 0.0);
    CHECK(sp.Z.front().dyi == 1.0);

    sp = flow_sensitivities(kFig1, make_switching(0.3), {2.0, 3.0}, 0.7, {});
    for (const auto& z : sp.Z) CHECK(z.det() > 0.0);
}

TEST_CASE("no-susceptible column has explicit sensitivities") {
    SensitivityPath sp = flow_sensitivities(kFig1, make_constant(1.0), {0.0, 2.0}, 0.5, {});
    for (std::size_t k = 0; k < sp.times.size(); ++k) {
        CHECK(sp.Z[k].dxi >= 0.0);
        CHECK(std::abs(sp.Z[k].dyi - std::exp(-kFig1.gamma * sp.times[k])) < 1e-9);
    }
}

TEST_CASE("flow sensitivities match finite differences of the flow") {
    double t_end = 0.4, h = 1e-5;
    ControlLaw c = make_switching(0.2);
    SensitivityPath sp = flow_sensitivities(kFig1, c, {2.0, 3.0}, t_end, {});
    const Mat2& z = sp.Z.back();

    oracle::Params op{0.5, 2.0, 1.0};
    auto rr = [&c](double t) { return c(t); };
    auto xt = [&](double x0, double y0) {
        return oracle::state_at(op, rr, {0.2}, x0, y0, t_end, 1e-5);
    };
    auto xp = xt(2.0 + h, 3.0), xm = xt(2.0 - h, 3.0);
    auto yp = xt(2.0, 3.0 + h), ym = xt(2.0, 3.0 - h);
    CHECK(std::abs(z.dxs - (xp.s - xm.s) / (2 * h)) < 1e-6 * (1.0 + std::abs(z.dxs)));
    CHECK(std::abs(z.dxi - (xp.i - xm.i) / (2 * h)) < 1e-6 * (1.0 + std::abs(z.dxi)));
    CHECK(std::abs(z.dys - (yp.s - ym.s) / (2 * h)) < 1e-6 * (1.0 + std::abs(z.dys)));
    CHECK(std::abs(z.dyi - (yp.i - ym.i) / (2 * h)) < 1e-6 * (1.0 + std::abs(z.dyi)));
}

TEST_CASE("analytic gradient agrees with central differences") {
    struct Case {
        ControlLaw c;
        double x, y;
    } cases[] = {
        {make_switching(0.0), 2.0, 3.0},
        {make_constant(0.0), 2.0, 3.0},
        {make_switching(0.25), 1.5, 2.5},
        {make_piecewise({0.2, 0.5}, {0.3, 0.9, 0.6}), 2.5, 2.0},
    };
    for (const auto& cs : cases) {
        EradicationGradient g = gradient_eradication_time(kFig1, cs.c, cs.x, cs.y, {});
        EradicationGradient fd = fd_gradient(kFig1, cs.c, cs.x, cs.y, 1e-5);
        CHECK(std::abs(g.du_dx - fd.du_dx) < 1e-5 * (1.0 + std::abs(fd.du_dx)));
        CHECK(std::abs(g.du_dy - fd.du_dy) < 1e-5 * (1.0 + std::abs(fd.du_dy)));
        CHECK(g.u >= 0.0);
    }
}

TEST_CASE("gradient on the no-susceptible column") {
    // u = ln(y/mu)/gamma there, so du/dy = 1/(gamma y)
    EradicationGradient g = gradient_eradication_time(kFig1, make_constant(0.0), 0.0, 2.0, {});
    CHECK(std::abs(g.du_dy - 1.0 / (2.0 * 2.0)) < 1e-8);
}

TEST_CASE("threshold boundary: the gradient extends continuously") {
    // On y = mu with beta x < gamma the eradication is instant; the
    // continuous extension of the interior gradient is (0, 1/((gamma-beta x) mu)).
    for (double x : {1.0, 2.0, 3.0}) {
        EradicationGradient g = gradient_eradication_time(kFig1, make_constant(0.0), x, 1.0, {});
        double expected = 1.0 / ((kFig1.gamma - kFig1.beta * x) * kFig1.mu);
        CHECK(g.boundary_formula);
        CHECK(g.du_dx == 0.0);
        CHECK(g.du_dy == doctest::Approx(expected));

        // interior limit: approach the boundary from above
        EradicationGradient gi =
            gradient_eradication_time(kFig1, make_constant(0.0), x, 1.0 + 1e-6, {});
        CHECK(std::abs(gi.du_dy - expected) < 1e-4);
        CHECK(std::abs(gi.du_dx) < 1e-4);
    }
}

TEST_CASE("time shift identity along a switching trajectory") {
    ControlLaw c = make_switching(0.3);
    double u = eradication_time(kFig1, c, 2.0, 3.0, {});
    oracle::Params op{0.5, 2.0, 1.0};
    auto rr = [&c](double t) { return c(t); };
    for (double t : {0.1, 0.3, 0.45}) {
        REQUIRE(t < u);
        auto st = oracle::state_at(op, rr, {0.3}, 2.0, 3.0, t, 1e-5);
        double tail = eradication_time(kFig1, c.shift(t), st.s, st.i, {});
        CHECK(std::abs(u - (t + tail)) < 1e-7);
    }
}

TEST_SUITE_END();
