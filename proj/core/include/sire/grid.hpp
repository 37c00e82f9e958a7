#pragma once

#include <cmath>
#include <stdexcept>

#include "sire/model.hpp"

namespace sire {

// Uniform phase-plane grid with the bottom row on the eradication threshold.
// An optional triangular mask {x >= delta, y >= mu + delta, x + y <= N}
// restricts probe and classification domains.
struct GridSpec {
    double x_min = 0.0;
    double x_max = 4.0;
    double y_min = 1.0; // must equal mu of the paired ModelParams
    double y_max = 4.0;
    int nx = 101;
    int ny = 101;

    enum class Mask { rectangle, triangle };
    Mask mask = Mask::rectangle;
    double tri_N = 0.0;
    double tri_delta = 0.0;

    void validate() const {
        if (!(x_min >= 0.0) || !(x_min < x_max))
            throw std::invalid_argument("GridSpec: requires 0 <= x_min < x_max");
        if (!(y_min > 0.0) || !(y_min < y_max))
            throw std::invalid_argument("GridSpec: requires 0 < y_min < y_max");
        if (nx < 3 || ny < 3)
            throw std::invalid_argument("GridSpec: requires nx, ny >= 3");
        if (mask == Mask::triangle && (!(tri_delta > 0.0) || !(tri_N > tri_delta)))
            throw std::invalid_argument("GridSpec: triangle mask requires 0 < delta < N");
    }

    double dx() const { return (x_max - x_min) / (nx - 1); }
    double dy() const { return (y_max - y_min) / (ny - 1); }
    double x(int i) const { return (i == nx - 1) ? x_max : x_min + dx() * i; }
    double y(int j) const { return (j == ny - 1) ? y_max : y_min + dy() * j; }
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i);
    }
    std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }

    bool in_mask(double x_, double y_) const {
        if (mask == Mask::rectangle) return true;
        return x_ >= tri_delta && y_ >= y_min + tri_delta && x_ + y_ <= tri_N;
    }
};

} // namespace sire
