#pragma once

#include <array>
#include <vector>

#include "duosim/market.hpp"

namespace duosim {

/// Qualities the firms keep if bargaining fails, with their equilibrium
/// utilities. The utilities are always recomputed from q0.
class DisagreementPoint {
public:
    explicit DisagreementPoint(QualityPair q0);

    const QualityPair& q0() const noexcept { return q0_; }
    double u_low() const noexcept { return u_low_; }
    double u_high() const noexcept { return u_high_; }

private:
    QualityPair q0_;
    double u_low_;
    double u_high_;
};

struct NashSolution {
    double q_low = 0.0;
    double q_high = 0.0;
    double ratio = 0.0;      // q_low / q_high
    double objective = 0.0;  // N at (q_low, q_high)
    double u_low0 = 0.0;     // disagreement utilities
    double u_high0 = 0.0;
};

struct NashOptions {
    double golden_tolerance = 1e-10;
    // Slack allowed when intersecting the two utility constraints.
    double feasibility_tolerance = 1e-12;
};

/// (U_l(q) - u_l0)(U_h(q) - u_h0). Negative off the feasible set.
double nash_objective(const QualityPair& q, const DisagreementPoint& d);

struct StationaryCubic {
    std::array<double, 4> coefficients{};  // highest degree first
    std::vector<double> roots;             // real roots, ascending
};

/// Numerator of dN/dq_l for q_h = 1 when the disagreement utilities come
/// from an equilibrium with ratio rho_0 and high utility u_h0 (so that
/// u_l0 = rho_0 u_h0 / 4).
StationaryCubic stationary_cubic(double u_h0, double rho_0);

/// Feasible q_l range [lo, hi] at q_h = q_h_max, in absolute units. Throws
/// InfeasibleDisagreement when empty.
std::array<double, 2> feasible_low_interval(const DisagreementPoint& d, double q_h_max,
                                            double tolerance = 1e-12);

/// Nash bargaining solution with q_h fixed at q_h_max. The problem is solved
/// at q_h = 1 (utilities are homogeneous of degree one) with golden-section
/// search over the closed-form feasible interval; stationary cubic roots
/// and interval endpoints are then compared and the best N wins.
/// Requires d.q0().high() <= q_h_max <= 1.
NashSolution solve_nash(const DisagreementPoint& d, double q_h_max,
                        const NashOptions& opts = {});

/// Brute-force check: evaluates N on {0, step, 2 step, ..., q_h_max} and
/// returns the best feasible grid point. If no grid point is feasible, the
/// one violating the constraints least is returned.
NashSolution nash_grid_oracle(const DisagreementPoint& d, double q_h_max, double step);

}  // namespace duosim
