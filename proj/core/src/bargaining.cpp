#include "duosim/bargaining.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "duosim/numeric.hpp"

namespace duosim {
namespace {

// Largest x in [0,1] with U_h(x, 1) >= u, i.e. 4(1-x) >= u (4-x)^2.
double high_constraint_upper(double u) {
    if (u <= 0.0) return 1.0;
    if (u >= 0.25) return 0.0;
    return 2.0 * (1.0 - 4.0 * u) / (std::sqrt(1.0 - 3.0 * u) + 1.0 - 2.0 * u);
}

// Roots of x(1-x) = u (4-x)^2 on [0,1]. U_l(., 1) peaks at 4/7 with value 1/48.
std::array<double, 2> low_constraint_band(double u) {
    if (u <= 0.0) return {0.0, 1.0};
    const double disc = 1.0 - 48.0 * u;
    if (disc < 0.0) return {1.0, 0.0};  // empty
    const double s = (1.0 + 8.0 * u) + std::sqrt(disc);
    return {32.0 * u / s, s / (2.0 * (1.0 + u))};
}

double objective_at(double x, double u_l, double u_h) {
    return (low_utility(x, 1.0) - u_l) * (high_utility(x, 1.0) - u_h);
}

}  // namespace

DisagreementPoint::DisagreementPoint(QualityPair q0)
    : q0_(q0), u_low_(low_utility(q0.low(), q0.high())), u_high_(high_utility(q0.low(), q0.high())) {}

double nash_objective(const QualityPair& q, const DisagreementPoint& d) {
    const MarketOutcome m = Market().equilibrium_outcome(q);
    return (m.utility_low - d.u_low()) * (m.utility_high - d.u_high());
}

StationaryCubic stationary_cubic(double u_h0, double rho_0) {
    const double u = u_h0;
    StationaryCubic c;
    c.coefficients = {7.0 * u + u * rho_0 + 4.0, -60.0 * u - 6.0 * u * rho_0 + 32.0,
                      144.0 * u - 52.0, -64.0 * u + 32.0 * u * rho_0 + 16.0};
    c.roots = numeric::cubic_real_roots(c.coefficients);
    return c;
}

std::array<double, 2> feasible_low_interval(const DisagreementPoint& d, double q_h_max,
                                            double tolerance) {
    const double u_l = d.u_low() / q_h_max;
    const double u_h = d.u_high() / q_h_max;
    const auto band = low_constraint_band(u_l);
    const double lo = band[0];
    const double hi = std::min(band[1], high_constraint_upper(u_h));
    if (lo > hi + tolerance) {
        std::ostringstream os;
        os << "no q_l satisfies both constraints for q0 = (" << d.q0().low() << ", "
           << d.q0().high() << "), q_h_max = " << q_h_max;
        throw InfeasibleDisagreement(os.str());
    }
    return {lo * q_h_max, std::max(lo, hi) * q_h_max};
}

NashSolution solve_nash(const DisagreementPoint& d, double q_h_max, const NashOptions& opts) {
    if (!(q_h_max > 0.0 && q_h_max <= 1.0)) {
        throw std::invalid_argument("solve_nash: q_h_max must lie in (0, 1]");
    }
    if (d.q0().high() > q_h_max * (1.0 + 1e-12)) {
        throw std::invalid_argument("solve_nash: disagreement q_h exceeds q_h_max");
    }

    // Work at q_h = 1; utilities scale linearly, N quadratically.
    const double u_l = d.u_low() / q_h_max;
    const double u_h = d.u_high() / q_h_max;
    const auto interval = feasible_low_interval(d, q_h_max, opts.feasibility_tolerance);
    const double lo = interval[0] / q_h_max;
    const double hi = interval[1] / q_h_max;

    auto f = [&](double x) { return objective_at(x, u_l, u_h); };
    numeric::ScalarMaximum best = numeric::golden_section_max(f, lo, hi, opts.golden_tolerance);

    const StationaryCubic cubic = stationary_cubic(u_h, d.q0().ratio());
    for (double r : cubic.roots) {
        if (r <= 0.0 || r > 4.0 / 7.0 || r < lo || r > hi) continue;
        // A stationary root is the exact maximiser; golden section can only
        // tie it up to rounding on the flat top.
        const double v = f(r);
        if (v >= best.value - 8.0 * std::numeric_limits<double>::epsilon() * std::abs(best.value)) best = {r, v};
    }

    NashSolution s;
    s.q_low = best.argmax * q_h_max;
    s.q_high = q_h_max;
    s.ratio = best.argmax;
    s.objective = best.value * q_h_max * q_h_max;
    s.u_low0 = d.u_low();
    s.u_high0 = d.u_high();
    return s;
}

NashSolution nash_grid_oracle(const DisagreementPoint& d, double q_h_max, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("nash_grid_oracle: step must be positive");

    const auto n = static_cast<long long>(std::floor(q_h_max / step));
    double best_x = 0.0;
    double best_value = -std::numeric_limits<double>::infinity();
    bool found = false;
    double least_violation = std::numeric_limits<double>::infinity();
    double least_violation_x = 0.0;

    auto visit = [&](double x) {
        const double ul = low_utility(x, q_h_max) - d.u_low();
        const double uh = high_utility(x, q_h_max) - d.u_high();
        if (ul >= -1e-15 && uh >= -1e-15) {
            const double v = ul * uh;
            if (!found || v > best_value) {
                best_value = v;
                best_x = x;
                found = true;
            }
        } else {
            const double violation = -std::min(ul, uh);
            if (violation < least_violation) {
                least_violation = violation;
                least_violation_x = x;
            }
        }
    };
    for (long long i = 0; i <= n; ++i) visit(std::min(static_cast<double>(i) * step, q_h_max));
    visit(q_h_max);

    if (!found) best_x = least_violation_x;
    NashSolution s;
    s.q_low = best_x;
    s.q_high = q_h_max;
    s.ratio = best_x / q_h_max;
    s.objective = (low_utility(best_x, q_h_max) - d.u_low()) *
                  (high_utility(best_x, q_h_max) - d.u_high());
    s.u_low0 = d.u_low();
    s.u_high0 = d.u_high();
    return s;
}

}  // namespace duosim
