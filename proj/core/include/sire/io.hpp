#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "sire/dynamics.hpp"
#include "sire/hjb.hpp"
#include "sire/value.hpp"

namespace sire {

// Shortest text keeping full double round-trip fidelity ("%.17g", C locale).
std::string format_g17(double v);

std::string sha1_hex(std::string_view data);

void write_text_file(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

// t,S,I,r rows at full precision; one row per integrator sample.
std::string trajectory_csv(const Trajectory& tr);

// x,y,u,u_full,tau_star,in_S rows over active nodes, row-major.
std::string free_boundary_csv(const FreeBoundaryMap& map);

// x,y,u,residual_hjb,residual_obstacle,in_S rows; in_S compares the solved
// grid against the immediate-effort time at the classification tolerance.
std::string hjb_grid_csv(const ModelParams& p, const GridValues& gv,
                         const std::vector<double>& residual_drift,
                         const std::vector<double>& residual_obst,
                         const std::vector<double>& u_full, double boundary_rel_tol);

} // namespace sire
