#include "duosim/market.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace duosim {

QualityPair::QualityPair(double low, double high) : low_(low), high_(high) {
    if (!(std::isfinite(low) && std::isfinite(high)) || low < 0.0 || high > 1.0 ||
        low > high) {
        std::ostringstream os;
        os << "QualityPair requires 0 <= q_l <= q_h <= 1, got (" << low << ", " << high << ")";
        throw std::invalid_argument(os.str());
    }
}

double consumer_utility(double theta, double quality, double price) noexcept {
    return theta * quality - price;
}

double low_utility(double low, double high) noexcept {
    if (high <= 0.0) return 0.0;
    const double denom = 4.0 * high - low;
    return low * high * (high - low) / (denom * denom);
}

double high_utility(double low, double high) noexcept {
    if (high <= 0.0) return 0.0;
    const double denom = 4.0 * high - low;
    return 4.0 * high * high * (high - low) / (denom * denom);
}

Market::Market(double tolerance) : tolerance_(tolerance) {
    if (!(tolerance >= 0.0)) throw std::invalid_argument("Market tolerance must be >= 0");
}

Demands Market::demands(const QualityPair& q, const PriceQuote& prices) const {
    if (q.low() <= tolerance_ || q.high() - q.low() <= tolerance_) {
        throw DegenerateQualities(
            "demands: need q_l > 0 and q_h > q_l; use the degenerate equilibrium instead");
    }
    if (prices.low < 0.0 || prices.high < 0.0) {
        throw std::invalid_argument("demands: prices must be non-negative");
    }
    // Indifference thresholds: theta_h between the two firms, theta_l between
    // the low firm and buying nothing.
    const double theta_h = (prices.high - prices.low) / (q.high() - q.low());
    const double theta_l = prices.low / q.low();

    Demands d;
    d.high = std::clamp(1.0 - theta_h, 0.0, 1.0);
    d.low = std::clamp(theta_h - theta_l, 0.0, 1.0 - d.high);
    return d;
}

PriceQuote Market::equilibrium_prices(const QualityPair& q) const {
    if (is_degenerate(q)) return {0.0, 0.0};
    const double ql = q.low();
    const double qh = q.high();
    const double denom = 4.0 * qh - ql;
    return {ql * (qh - ql) / denom, 2.0 * qh * (qh - ql) / denom};
}

MarketOutcome Market::equilibrium_outcome(const QualityPair& q) const {
    MarketOutcome out;
    if (is_degenerate(q)) {
        out.demand_low = 0.0;
        out.demand_high = 1.0;
        return out;
    }
    const double ql = q.low();
    const double qh = q.high();
    const double denom = 4.0 * qh - ql;
    out.prices = equilibrium_prices(q);
    out.demand_low = qh / denom;
    out.demand_high = 2.0 * qh / denom;
    out.utility_low = low_utility(ql, qh);
    out.utility_high = high_utility(ql, qh);
    return out;
}

UtilityGradients Market::utility_gradients(const QualityPair& q) const {
    const double ql = q.low();
    const double qh = q.high();
    if (qh <= tolerance_) {
        throw DegenerateQualities("utility_gradients: q_h must be positive");
    }
    const double denom = 4.0 * qh - ql;
    const double cube = denom * denom * denom;

    UtilityGradients g;
    g.high_wrt_high = 4.0 * qh * (4.0 * qh * qh - 3.0 * qh * ql + 2.0 * ql * ql) / cube;
    g.low_wrt_high = ql * ql * (2.0 * qh + ql) / cube;
    g.low_wrt_low = qh * qh * (4.0 * qh - 7.0 * ql) / cube;
    g.high_wrt_low = -4.0 * qh * qh * (2.0 * qh + ql) / cube;
    return g;
}

}  // namespace duosim
