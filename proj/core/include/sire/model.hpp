#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace sire {

// Thrown when an algorithm fails numerically (divergent state, degenerate
// threshold crossing, non-convergent iteration).  Distinct from
// std::invalid_argument, which is reserved for bad inputs and violated
// preconditions.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Transmission/recovery parameters plus the eradication threshold.
// beta > 0, gamma > 0, 0 < mu.
struct ModelParams {
    double beta = 0.5;
    double gamma = 2.0;
    double mu = 1.0;

    void validate() const {
        if (!(beta > 0.0) || !std::isfinite(beta))
            throw std::invalid_argument("ModelParams: beta must be positive and finite");
        if (!(gamma > 0.0) || !std::isfinite(gamma))
            throw std::invalid_argument("ModelParams: gamma must be positive and finite");
        if (!(mu > 0.0) || !std::isfinite(mu))
            throw std::invalid_argument("ModelParams: mu must be positive and finite");
    }

    // Susceptible level at which infections neither grow nor decay.
    double critical_susceptible() const { return gamma / beta; }

    // Every admissible trajectory from (x, y) is eradicated by (x+y)/(mu*gamma).
    double time_upper_bound(double x, double y) const { return (x + y) / (mu * gamma); }
};

// Point of the susceptible/infected phase plane.
struct State {
    double s = 0.0;
    double i = 0.0;

    void validate() const {
        if (!(s >= 0.0) || !std::isfinite(s))
            throw std::invalid_argument("State: s must be non-negative and finite");
        if (!(i >= 0.0) || !std::isfinite(i))
            throw std::invalid_argument("State: i must be non-negative and finite");
    }
};

} // namespace sire
