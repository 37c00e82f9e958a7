#include "sire/control.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace sire {
namespace {

void check_level(double a) {
    if (!(a >= 0.0 && a <= 1.0) || !std::isfinite(a))
        throw std::invalid_argument("control level must lie in [0,1]");
}

void check_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t))
        throw std::invalid_argument("control evaluation time must be >= 0 and finite");
}

} // namespace

ControlLaw::ControlLaw(Rep rep) : rep_(std::move(rep)) {
    std::visit(
        [](const auto& law) {
            using T = std::decay_t<decltype(law)>;
            if constexpr (std::is_same_v<T, Constant>) {
                check_level(law.level);
            } else if constexpr (std::is_same_v<T, Switching>) {
                if (!(law.tau >= 0.0) || !std::isfinite(law.tau))
                    throw std::invalid_argument("switching time must be >= 0 and finite");
            } else if constexpr (std::is_same_v<T, PiecewiseConstant>) {
                if (law.levels.size() != law.breakpoints.size() + 1)
                    throw std::invalid_argument("piecewise control needs one more level than breakpoints");
                for (double a : law.levels) check_level(a);
                double prev = 0.0;
                for (double b : law.breakpoints) {
                    if (!(b > prev) || !std::isfinite(b))
                        throw std::invalid_argument("piecewise breakpoints must be positive and strictly increasing");
                    prev = b;
                }
            } else {
                if (!law.head || !law.tail)
                    throw std::invalid_argument("concat requires both laws");
                if (!(law.t_cut >= 0.0) || !std::isfinite(law.t_cut))
                    throw std::invalid_argument("concat cut time must be >= 0 and finite");
            }
        },
        rep_);
}

double ControlLaw::operator()(double t) const {
    check_time(t);
    return std::visit(
        [t](const auto& law) -> double {
            using T = std::decay_t<decltype(law)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return law.level;
            } else if constexpr (std::is_same_v<T, Switching>) {
                return t <= law.tau ? 0.0 : 1.0;
            } else if constexpr (std::is_same_v<T, PiecewiseConstant>) {
                auto it = std::upper_bound(law.breakpoints.begin(), law.breakpoints.end(), t);
                return law.levels[static_cast<std::size_t>(it - law.breakpoints.begin())];
            } else {
                return t <= law.t_cut ? (*law.head)(t) : (*law.tail)(t - law.t_cut);
            }
        },
        rep_);
}

std::vector<double> ControlLaw::breakpoints_in(double t_end) const {
    std::vector<double> out;
    std::visit(
        [&](const auto& law) {
            using T = std::decay_t<decltype(law)>;
            if constexpr (std::is_same_v<T, Switching>) {
                if (law.tau > 0.0 && law.tau < t_end) out.push_back(law.tau);
            } else if constexpr (std::is_same_v<T, PiecewiseConstant>) {
                for (double b : law.breakpoints)
                    if (b > 0.0 && b < t_end) out.push_back(b);
            } else if constexpr (std::is_same_v<T, Concat>) {
                for (double b : law.head->breakpoints_in(std::min(law.t_cut, t_end)))
                    out.push_back(b);
                if (law.t_cut > 0.0 && law.t_cut < t_end) out.push_back(law.t_cut);
                if (t_end > law.t_cut)
                    for (double b : law.tail->breakpoints_in(t_end - law.t_cut))
                        if (law.t_cut + b < t_end) out.push_back(law.t_cut + b);
            }
        },
        rep_);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

ControlLaw ControlLaw::shift(double t0) const {
    check_time(t0);
    if (t0 == 0.0) return *this;
    return std::visit(
        [t0, this](const auto& law) -> ControlLaw {
            using T = std::decay_t<decltype(law)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return *this;
            } else if constexpr (std::is_same_v<T, Switching>) {
                // the shifted law is identically 1 once the switch is past
                if (t0 >= law.tau) return make_constant(1.0);
                return make_switching(law.tau - t0);
            } else if constexpr (std::is_same_v<T, PiecewiseConstant>) {
                PiecewiseConstant tail;
                std::size_t k = 0;
                while (k < law.breakpoints.size() && law.breakpoints[k] <= t0) ++k;
                tail.levels.push_back(law.levels[k]);
                for (; k < law.breakpoints.size(); ++k) {
                    tail.breakpoints.push_back(law.breakpoints[k] - t0);
                    tail.levels.push_back(law.levels[k + 1]);
                }
                if (tail.breakpoints.empty()) return make_constant(tail.levels[0]);
                return ControlLaw(std::move(tail));
            } else {
                if (t0 >= law.t_cut) return law.tail->shift(t0 - law.t_cut);
                return concat(law.head->shift(t0), law.t_cut - t0, *law.tail);
            }
        },
        rep_);
}

ControlLaw make_constant(double level) { return ControlLaw(Constant{level}); }

ControlLaw make_switching(double tau) { return ControlLaw(Switching{tau}); }

ControlLaw make_piecewise(std::vector<double> breakpoints, std::vector<double> levels) {
    return ControlLaw(PiecewiseConstant{std::move(breakpoints), std::move(levels)});
}

ControlLaw concat(const ControlLaw& head, double t_cut, const ControlLaw& tail) {
    if (t_cut == 0.0) return tail; // empty head
    Concat c;
    c.head = std::make_shared<const ControlLaw>(head);
    c.t_cut = t_cut;
    c.tail = std::make_shared<const ControlLaw>(tail);
    return ControlLaw(std::move(c));
}

ControlLaw random_piecewise(std::uint64_t seed, int n_pieces, double horizon) {
    if (n_pieces < 1) throw std::invalid_argument("random control needs at least one piece");
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw std::invalid_argument("random control horizon must be positive and finite");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> levels(static_cast<std::size_t>(n_pieces));
    for (double& a : levels) a = unit(rng);
    if (n_pieces == 1) return make_constant(levels[0]);
    std::vector<double> breaks(static_cast<std::size_t>(n_pieces - 1));
    for (double& b : breaks) b = horizon * unit(rng);
    std::sort(breaks.begin(), breaks.end());
    // nudge any coincident draws apart to keep strict monotonicity
    for (std::size_t k = 1; k < breaks.size(); ++k)
        if (breaks[k] <= breaks[k - 1])
            breaks[k] = std::nextafter(breaks[k - 1], horizon + 1.0);
    return make_piecewise(std::move(breaks), std::move(levels));
}

PiecewiseConstant to_piecewise(const ControlLaw& c) {
    PiecewiseConstant out;
    const double far = 1e300;
    out.breakpoints = c.breakpoints_in(far);
    if (out.breakpoints.empty()) {
        out.levels.push_back(c(0.0));
        return out;
    }
    out.levels.push_back(c(out.breakpoints.front() * 0.5));
    for (std::size_t k = 0; k + 1 < out.breakpoints.size(); ++k)
        out.levels.push_back(c(0.5 * (out.breakpoints[k] + out.breakpoints[k + 1])));
    out.levels.push_back(c(out.breakpoints.back() + 1.0));
    return out;
}

} // namespace sire
