// One-time oracle pass: prints the frozen constants used by the unit and
// acceptance tests.  Rerun manually after any oracle change:
//   cmake --build build --target oracle_freeze && ./build/tests/oracle_freeze

#include <chrono>
#include <cstdio>

#include "oracle.hpp"

namespace {

struct RefPoint {
    oracle::Params p;
    double x, y;
};

constexpr RefPoint kRefPoints[] = {
    {{0.5, 2.0, 1.0}, 2.0, 3.0},  {{0.5, 2.0, 1.0}, 1.0, 1.5},  {{0.5, 2.0, 1.0}, 0.5, 2.0},
    {{0.5, 2.0, 1.0}, 3.0, 1.2},  {{0.5, 2.0, 1.0}, 4.0, 4.0},  {{2.0, 2.0, 1.0}, 2.0, 1.5},
    {{2.0, 2.0, 1.0}, 0.8, 2.0},  {{2.0, 2.0, 1.0}, 3.0, 3.0},  {{2.0, 2.0, 1.0}, 1.2, 3.8},
    {{1.0, 1.0, 0.5}, 2.0, 1.5},
};

} // namespace

int main() {
    const oracle::Params fig1{0.5, 2.0, 1.0};
    oracle::Control none = [](double) { return 0.0; };
    oracle::Control full = [](double) { return 1.0; };
    double spread = 0.0;

    double t_max = 200.0;
    double T0 = oracle::erad_time_halved(fig1, none, {}, 2.0, 3.0, 2e-4, t_max, &spread);
    std::printf("kNoEffortTime   = %.17g  (spread %.3e)\n", T0, spread);
    double T1 = oracle::erad_time_halved(fig1, full, {}, 2.0, 3.0, 2e-4, t_max, &spread);
    std::printf("kFullEffortTime = %.17g  (spread %.3e)\n", T1, spread);

    auto start = std::chrono::steady_clock::now();
    std::printf("\n// beta gamma mu x y : u tau_best u_full u_never (n_tau=100000, h=2e-4)\n");
    for (const auto& rp : kRefPoints) {
        auto r = oracle::brute_force_value(rp.p, rp.x, rp.y, 100000, 2e-4);
        double uf2 = oracle::erad_time_halved(rp.p, full, {}, rp.x, rp.y, 2e-4,
                                              40.0 * (rp.x + rp.y) / (rp.p.mu * rp.p.gamma) + 1.0,
                                              &spread);
        std::printf("{{%g, %g, %g}, %g, %g, %.17g, %.17g, %.17g, %.17g},  // u_full halved %.12g "
                    "(spread %.2e)\n",
                    rp.p.beta, rp.p.gamma, rp.p.mu, rp.x, rp.y, r.u, r.tau_best, r.u_full,
                    r.u_never, uf2, spread);
    }
    auto stop = std::chrono::steady_clock::now();
    std::printf("\noracle pass wall time: %.1f s\n",
                std::chrono::duration<double>(stop - start).count());
    return 0;
}
