#pragma once

#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

namespace sire {

class ControlLaw;

// r(t) = level for all t.
struct Constant {
    double level = 0.0;
};

// r(t) = 0 on [0, tau], 1 on (tau, inf).  tau = 0 is immediate full effort.
struct Switching {
    double tau = 0.0;
};

// Right-continuous step function: levels[k] on [breakpoints[k-1], breakpoints[k]),
// with breakpoints[-1] = 0 and breakpoints[n-1] extending to infinity.
struct PiecewiseConstant {
    std::vector<double> breakpoints; // strictly increasing, positive
    std::vector<double> levels;      // size = breakpoints.size() + 1, each in [0,1]
};

// head on [0, t_cut], tail(t - t_cut) afterwards.  Kept symbolic so the
// splice point keeps exact head semantics at t = t_cut.
struct Concat {
    std::shared_ptr<const ControlLaw> head;
    double t_cut = 0.0;
    std::shared_ptr<const ControlLaw> tail;
};

// Admissible vaccination effort: measurable t >= 0 -> [0, 1].  All variants
// are step functions, which is sufficient for the optimization carried out
// here (optimal controls are bang-bang).
class ControlLaw {
public:
    using Rep = std::variant<Constant, Switching, PiecewiseConstant, Concat>;

    ControlLaw() : rep_(Constant{0.0}) {}
    ControlLaw(Rep rep);

    // Value at time t >= 0; throws std::invalid_argument for t < 0.
    double operator()(double t) const;

    const Rep& rep() const { return rep_; }

    // Discontinuity times in the open interval (0, t_end), sorted, unique.
    // Integrators align their step partitions on these.
    std::vector<double> breakpoints_in(double t_end) const;

    // Tail control s -> r(t0 + s).
    ControlLaw shift(double t0) const;

private:
    Rep rep_;
};

ControlLaw make_constant(double level);
ControlLaw make_switching(double tau);
ControlLaw make_piecewise(std::vector<double> breakpoints, std::vector<double> levels);

inline double evaluate(const ControlLaw& c, double t) { return c(t); }

// head on [0, t_cut], then tail restarted at t_cut.
ControlLaw concat(const ControlLaw& head, double t_cut, const ControlLaw& tail);

// Seeded step function with n_pieces levels uniform in [0,1] and sorted
// uniform breakpoints in (0, horizon).  n_pieces = 1 collapses to Constant.
ControlLaw random_piecewise(std::uint64_t seed, int n_pieces, double horizon);

// Right-continuous flattening (used for serialization; differs from the
// exact law only on the null set of breakpoints).
PiecewiseConstant to_piecewise(const ControlLaw& c);

} // namespace sire
