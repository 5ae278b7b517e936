#pragma once

#include "duosim/errors.hpp"

namespace duosim {

/// Ordered model qualities of the low and high firm, 0 <= low <= high <= 1.
///
/// Quality is one minus the average loss of a model on both firms' data. The
/// constructor rejects pairs that violate the ordering; when a training update
/// inverts the order the caller relabels roles before building a pair.
class QualityPair {
public:
    QualityPair(double low, double high);

    double low() const noexcept { return low_; }
    double high() const noexcept { return high_; }

    /// low / high, or 0 when high is 0.
    double ratio() const noexcept { return high_ > 0.0 ? low_ / high_ : 0.0; }

    friend bool operator==(const QualityPair&, const QualityPair&) = default;

private:
    double low_;
    double high_;
};

struct PriceQuote {
    double low = 0.0;
    double high = 0.0;
};

struct Demands {
    double low = 0.0;
    double high = 0.0;
};

/// Equilibrium prices, demands and firm revenues at a quality pair.
struct MarketOutcome {
    PriceQuote prices;
    double demand_low = 0.0;
    double demand_high = 0.0;
    double utility_low = 0.0;
    double utility_high = 0.0;
};

/// Partial derivatives of the price-optimal utilities.
struct UtilityGradients {
    double high_wrt_high = 0.0;  // dU_h/dq_h
    double low_wrt_high = 0.0;   // dU_l/dq_h
    double low_wrt_low = 0.0;    // dU_l/dq_l
    double high_wrt_low = 0.0;   // dU_h/dq_l
};

/// Utility theta*q - p of a type-theta consumer buying a model of quality q at
/// price p. "Buy neither" is worth 0; comparing against it is the caller's job.
double consumer_utility(double theta, double quality, double price) noexcept;

/// Vertically differentiated duopoly with consumer types uniform on [0,1].
///
/// All formulas are closed forms. A single tolerance decides when two
/// qualities coincide (q_h - q_l <= tol) or when q_l counts as zero.
class Market {
public:
    static constexpr double kDefaultTolerance = 1e-12;

    explicit Market(double tolerance = kDefaultTolerance);

    double tolerance() const noexcept { return tolerance_; }

    /// Demands at arbitrary prices. Requires q_l > tol and q_h - q_l > tol,
    /// throws DegenerateQualities otherwise. Results are clamped to [0,1]
    /// with demand_low further clamped so the two sum to at most 1.
    Demands demands(const QualityPair& q, const PriceQuote& prices) const;

    /// Bertrand-Nash prices. Coinciding qualities yield (0,0): each firm
    /// undercuts the other until prices vanish.
    PriceQuote equilibrium_prices(const QualityPair& q) const;

    /// Prices, demands and revenues at equilibrium. Demands use the
    /// closed forms q_h/(4q_h-q_l) and 2q_h/(4q_h-q_l), which stay finite at
    /// q_l = 0. Coinciding qualities give zero utilities and demands (0,1).
    MarketOutcome equilibrium_outcome(const QualityPair& q) const;

    /// Closed-form partials of (U_l, U_h). Throws DegenerateQualities when
    /// q_h <= tol.
    UtilityGradients utility_gradients(const QualityPair& q) const;

    bool is_degenerate(const QualityPair& q) const noexcept {
        return q.high() - q.low() <= tolerance_;
    }

private:
    double tolerance_;
};

/// Price-optimal utility of the low firm, q_l q_h (q_h - q_l) / (4 q_h - q_l)^2.
/// Takes raw values so grid searches can skip QualityPair validation;
/// requires 0 <= low <= high. Returns 0 when high is 0.
double low_utility(double low, double high) noexcept;

/// Price-optimal utility of the high firm, 4 q_h^2 (q_h - q_l) / (4 q_h - q_l)^2.
double high_utility(double low, double high) noexcept;

}  // namespace duosim
