#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "sire/dynamics.hpp"
#include "sire/grid.hpp"
#include "sire/hjb.hpp"
#include "sire/value.hpp"

namespace sire {

inline constexpr int kExitOk = 0;
inline constexpr int kExitProbeFailure = 1;
inline constexpr int kExitBadConfig = 2;
inline constexpr int kExitNumericalFailure = 3;

// Effective configuration of one command run.  The front end fills this from
// flags, environment overrides, and an optional key=value config file; the
// presets reproduce the two reference scenarios.
struct RunConfig {
    ModelParams params;
    double x0 = 2.0;
    double y0 = 3.0;
    std::optional<double> tau; // switch-at-tau control; absent means no effort
    double t_end = 0.0;        // simulate horizon; 0 => 2 * (x+y)/(mu*gamma)

    IntegratorConfig integ;
    SearchConfig search;
    GridSpec grid{0.01, 4.0, 1.0, 4.0, 101, 101};
    HjbConfig hjb;

    std::uint64_t seed = 0;
    std::filesystem::path out_dir = ".";
    std::string format = "csv"; // csv | json
    std::string preset;         // "", "fig1", "fig2"

    void apply_preset();
    // canonical key=value text of the scientific configuration (delivery
    // details like out_dir excluded); hashed into every output's metadata
    std::string canonical_text(const std::string& command) const;
};

int cmd_simulate(const RunConfig& cfg);
int cmd_value(const RunConfig& cfg);
int cmd_grid(const RunConfig& cfg);
int cmd_hjb(const RunConfig& cfg);
int cmd_pmp(const RunConfig& cfg);
int cmd_verify(const RunConfig& cfg);

// Shared exception-to-exit-code policy of the front end.
int dispatch(int (*cmd)(const RunConfig&), const RunConfig& cfg);

} // namespace sire
