#pragma once

#include <string>
#include <vector>

#include "duosim/losses.hpp"
#include "duosim/trace.hpp"

namespace duosim {

enum class CheckStatus { pass, fail, skip, info };
std::string to_string(CheckStatus s);

struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::skip;
    std::string detail;
    int failing_round = -1;  // first offending round, if any
    double value = 0.0;      // check-specific headline number
};

struct AuditReport {
    std::vector<CheckResult> checks;

    bool passed() const;
    /// nullptr when no check has that name.
    const CheckResult* find(const std::string& name) const;
    /// One line per check.
    std::string format() const;
};

struct AuditOptions {
    double tolerance = 1e-9;         // revenue drops, pacing, cap
    double market_tolerance = 1e-12; // recomputed prices/utilities
    double ratio_tolerance = 1e-9;   // "at rho*" band for the ratio check
    double ratio_floor = 0.02;
};

/// Replays a trace against the market formulas and the scheme's guarantees.
/// `model` may be null; checks that need it are then skipped.
///
/// Checks: well_formed, quality_range, market_consistency, price_ordering,
/// defection_flags, no_revenue_loss (fail for defection-free and
/// one-sided-low, info otherwise with the decrease count per firm in
/// detail and the high firm's count as value), pacing, low_cap,
/// ratio_monotone, terminal_ratio, descent_bound, nash_gap_fit (info,
/// value = fitted C), terminal_utilities (info, value = max final utility).
AuditReport audit_trace(const Trace& trace, const LossModel* model,
                        const AuditOptions& opts = {});

}  // namespace duosim
