#include "duosim/audit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace duosim {
namespace {

CheckResult make(std::string name, CheckStatus st, std::string detail, int round = -1,
                 double value = 0.0) {
    return {std::move(name), st, std::move(detail), round, value};
}

CheckResult skipped(std::string name, std::string why) {
    return make(std::move(name), CheckStatus::skip, std::move(why));
}

bool close(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

struct Context {
    const Trace& t;
    const std::vector<RoundRecord>& r;
    const AuditOptions& o;
    bool df() const { return t.config.scheme == Scheme::defection_free; }
};

CheckResult well_formed(const Context& c) {
    const int expected = c.t.config.rounds + 1;
    if (static_cast<int>(c.r.size()) != expected && c.t.summary.error.empty()) {
        std::ostringstream os;
        os << c.r.size() << " records, expected " << expected;
        return make("well_formed", CheckStatus::fail, os.str());
    }
    for (std::size_t i = 0; i < c.r.size(); ++i) {
        if (c.r[i].round != static_cast<int>(i)) {
            return make("well_formed", CheckStatus::fail, "round numbering breaks",
                        static_cast<int>(i));
        }
    }
    return make("well_formed", CheckStatus::pass, std::to_string(c.r.size()) + " records");
}

CheckResult quality_range(const Context& c) {
    for (const RoundRecord& x : c.r) {
        if (!(x.q_l >= 0.0 && x.q_l <= 1.0 && x.q_h >= 0.0 && x.q_h <= 1.0)) {
            return make("quality_range", CheckStatus::fail, "quality outside [0,1]", x.round);
        }
    }
    return make("quality_range", CheckStatus::pass, "all qualities in [0,1]");
}

CheckResult market_consistency(const Context& c) {
    const Market market;
    for (const RoundRecord& x : c.r) {
        const bool swapped = x.q_l > x.q_h;
        const QualityPair q = swapped ? QualityPair(x.q_h, x.q_l) : QualityPair(x.q_l, x.q_h);
        const MarketOutcome m = market.equilibrium_outcome(q);
        const double p_l = swapped ? m.prices.high : m.prices.low;
        const double p_h = swapped ? m.prices.low : m.prices.high;
        const double u_l = swapped ? m.utility_high : m.utility_low;
        const double u_h = swapped ? m.utility_low : m.utility_high;
        const double tol = c.o.market_tolerance;
        if (!close(x.p_l, p_l, tol) || !close(x.p_h, p_h, tol) || !close(x.u_l, u_l, tol) ||
            !close(x.u_h, u_h, tol)) {
            return make("market_consistency", CheckStatus::fail,
                        "recorded prices/utilities disagree with the equilibrium formulas",
                        x.round);
        }
        if (x.q_h > 0.0 && !close(x.rho, x.q_l / x.q_h, tol)) {
            return make("market_consistency", CheckStatus::fail, "rho != q_l/q_h", x.round);
        }
    }
    return make("market_consistency", CheckStatus::pass, "records match equilibrium formulas");
}

CheckResult price_ordering(const Context& c) {
    for (const RoundRecord& x : c.r) {
        // Compare the lower-quality firm's price with the higher one's.
        const double lo = x.q_l <= x.q_h ? x.p_l : x.p_h;
        const double hi = x.q_l <= x.q_h ? x.p_h : x.p_l;
        if (lo > hi + c.o.market_tolerance) {
            return make("price_ordering", CheckStatus::fail, "low price above high price",
                        x.round);
        }
    }
    return make("price_ordering", CheckStatus::pass, "p_l <= p_h in every round");
}

CheckResult defection_flags(const Context& c) {
    const double tol = c.t.config.tolerance;
    for (std::size_t i = 1; i < c.r.size(); ++i) {
        const bool dl = c.r[i].u_l < c.r[i - 1].u_l - tol;
        const bool dh = c.r[i].u_h < c.r[i - 1].u_h - tol;
        if (dl != c.r[i].defected_l || dh != c.r[i].defected_h) {
            return make("defection_flags", CheckStatus::fail,
                        "defection flags disagree with utility deltas", c.r[i].round);
        }
    }
    return make("defection_flags", CheckStatus::pass, "flags match utility deltas");
}

CheckResult no_revenue_loss(const Context& c) {
    const bool required = c.df() || c.t.config.scheme == Scheme::one_sided_low;
    int drops_l = 0, drops_h = 0, first = -1;
    double worst_l = 0.0, worst_h = 0.0;
    for (std::size_t i = 1; i < c.r.size(); ++i) {
        const double dl = c.r[i].u_l - c.r[i - 1].u_l;
        const double dh = c.r[i].u_h - c.r[i - 1].u_h;
        worst_l = std::min(worst_l, dl);
        worst_h = std::min(worst_h, dh);
        const bool bad = dl < -c.o.tolerance || dh < -c.o.tolerance;
        drops_l += dl < -c.o.tolerance;
        drops_h += dh < -c.o.tolerance;
        if (bad && first < 0) first = c.r[i].round;
    }
    std::ostringstream os;
    os << "decreases: low " << drops_l << ", high " << drops_h << "; min delta low " << worst_l
       << ", high " << worst_h;
    CheckStatus st = CheckStatus::info;
    if (required) st = first < 0 ? CheckStatus::pass : CheckStatus::fail;
    return make("no_revenue_loss", st, os.str(), first, drops_h);
}

CheckResult pacing(const Context& c) {
    if (!c.df()) return skipped("pacing", "defection-free runs only");
    const double b = c.t.summary.tilde_b;
    double worst = 1.0;
    for (std::size_t i = 1; i < c.r.size(); ++i) {
        if (c.r[i - 1].q_h <= 0.0) continue;
        const double ratio = c.r[i].q_h / c.r[i - 1].q_h;
        worst = std::max(worst, ratio);
        if (ratio > b + c.o.tolerance) {
            std::ostringstream os;
            os << "q_h grew by " << ratio << " > tilde_b " << b;
            return make("pacing", CheckStatus::fail, os.str(), c.r[i].round, ratio);
        }
    }
    std::ostringstream os;
    os << "largest growth factor " << worst << " <= " << b;
    return make("pacing", CheckStatus::pass, os.str(), -1, worst);
}

CheckResult low_cap(const Context& c) {
    if (!c.df()) return skipped("low_cap", "defection-free runs only");
    for (std::size_t i = 1; i < c.r.size(); ++i) {
        const RoundRecord& a = c.r[i - 1];
        const RoundRecord& x = c.r[i];
        if (x.q_l <= a.q_l) continue;  // the low firm did not move
        if (!(a.q_l < a.q_h && a.q_h <= x.q_h)) {
            return make("low_cap", CheckStatus::fail, "low firm moved without a valid cap",
                        x.round);
        }
        const double cap = hat_q_l(QualityPair(a.q_l, a.q_h), x.q_h);
        if (x.q_l > cap + c.o.tolerance) {
            std::ostringstream os;
            os << "q_l " << x.q_l << " exceeds cap " << cap;
            return make("low_cap", CheckStatus::fail, os.str(), x.round);
        }
    }
    return make("low_cap", CheckStatus::pass, "low quality never exceeds its cap");
}

CheckResult ratio_monotone(const Context& c) {
    if (!c.df()) return skipped("ratio_monotone", "defection-free runs only");
    const double rs = c.t.summary.target.ratio;
    const double band = c.o.ratio_tolerance;
    bool settled = false;
    for (std::size_t i = 1; i < c.r.size(); ++i) {
        const double prev = c.r[i - 1].rho;
        const double now = c.r[i].rho;
        if (std::abs(prev - rs) <= band) settled = true;
        if (settled) {
            if (std::abs(now - rs) > band) {
                return make("ratio_monotone", CheckStatus::fail, "ratio left the band around rho*",
                            c.r[i].round);
            }
        } else if (prev < rs && now < prev - 1e-12) {
            return make("ratio_monotone", CheckStatus::fail, "ratio fell while below rho*",
                        c.r[i].round);
        } else if (prev > rs && now > prev + 1e-12) {
            return make("ratio_monotone", CheckStatus::fail, "ratio rose while above rho*",
                        c.r[i].round);
        }
    }
    return make("ratio_monotone", CheckStatus::pass,
                settled ? "ratio moved monotonically to rho* and stayed"
                        : "ratio moved monotonically toward rho*");
}

CheckResult terminal_ratio(const Context& c) {
    if (!c.df()) return skipped("terminal_ratio", "defection-free runs only");
    if (c.r.empty()) return skipped("terminal_ratio", "no records");
    const NashSolution& s = c.t.summary.target;
    if (c.r.front().q_l > s.q_low) {
        return skipped("terminal_ratio", "q_l0 exceeds q_l*, convergence is not expected");
    }
    const double eps = std::max(0.0, s.q_high - c.r.back().q_h);
    const double bound = eps < s.q_high
                             ? (4.0 - 5.0 * s.ratio) * std::log10(s.q_high / (s.q_high - eps))
                             : INFINITY;
    const double allowed = std::max(c.o.ratio_floor, bound);
    const double gap = std::abs(s.ratio - c.r.back().rho);
    std::ostringstream os;
    os << "|rho* - rho_T| = " << gap << ", allowed " << allowed;
    return make("terminal_ratio", gap <= allowed ? CheckStatus::pass : CheckStatus::fail, os.str(),
                gap <= allowed ? -1 : c.r.back().round, gap);
}

CheckResult descent_bound(const Context& c, const LossModel* model) {
    if (!c.df()) return skipped("descent_bound", "defection-free runs only");
    if (!model) return skipped("descent_bound", "no loss model supplied");
    double alpha_sum = 0.0;
    for (std::size_t i = 1; i < c.r.size(); ++i) alpha_sum += c.r[i].alpha_h;
    if (alpha_sum <= 0.0) return skipped("descent_bound", "high firm never stepped");
    const TrainingState init = initial_state(*model, c.t.config.warmup);
    const double dist_sq = (init.x_high - model->optimum()).squaredNorm();
    const double bound = 2.0 * dist_sq / alpha_sum;
    const double gap = c.t.summary.target.q_high - c.r.back().q_h;
    std::ostringstream os;
    os << "q_h* - q_h,T = " << gap << " <= " << bound;
    return make("descent_bound", gap <= bound + c.o.tolerance ? CheckStatus::pass : CheckStatus::fail,
                os.str(), -1, gap);
}

CheckResult nash_gap_fit(const Context& c) {
    if (!c.df()) return skipped("nash_gap_fit", "defection-free runs only");
    const NashSolution& s = c.t.summary.target;
    double fitted = 0.0;
    for (const RoundRecord& x : c.r) {
        const double scale = (s.q_high - x.q_h) + std::abs(s.ratio - x.rho);
        if (scale <= 1e-12) continue;
        fitted = std::max(fitted, (s.objective - x.nash_value) / scale);
    }
    std::ostringstream os;
    os << "N* - N_t <= C (q_h* - q_h,t + |rho* - rho_t|) with fitted C = " << fitted;
    return make("nash_gap_fit", CheckStatus::info, os.str(), -1, fitted);
}

CheckResult terminal_utilities(const Context& c) {
    if (c.r.empty()) return skipped("terminal_utilities", "no records");
    const RoundRecord& x = c.r.back();
    std::ostringstream os;
    os << "final U_l = " << x.u_l << ", U_h = " << x.u_h << ", |q_l - q_h| = "
       << std::abs(x.q_l - x.q_h);
    return make("terminal_utilities", CheckStatus::info, os.str(), -1, std::max(x.u_l, x.u_h));
}

}  // namespace

std::string to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::pass: return "PASS";
        case CheckStatus::fail: return "FAIL";
        case CheckStatus::skip: return "SKIP";
        case CheckStatus::info: return "INFO";
    }
    return "?";
}

bool AuditReport::passed() const {
    return std::none_of(checks.begin(), checks.end(),
                        [](const CheckResult& c) { return c.status == CheckStatus::fail; });
}

const CheckResult* AuditReport::find(const std::string& name) const {
    for (const CheckResult& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

std::string AuditReport::format() const {
    std::ostringstream os;
    for (const CheckResult& c : checks) {
        os << to_string(c.status) << "  " << c.name << ": " << c.detail;
        if (c.failing_round >= 0 && c.status == CheckStatus::fail) os << " (round " << c.failing_round << ")";
        os << '\n';
    }
    return os.str();
}

AuditReport audit_trace(const Trace& trace, const LossModel* model, const AuditOptions& opts) {
    const Context c{trace, trace.records, opts};
    AuditReport rep;
    rep.checks = {well_formed(c),  quality_range(c),  market_consistency(c),
                  price_ordering(c), defection_flags(c), no_revenue_loss(c),
                  pacing(c),       low_cap(c),        ratio_monotone(c),
                  terminal_ratio(c), descent_bound(c, model), nash_gap_fit(c),
                  terminal_utilities(c)};
    return rep;
}

}  // namespace duosim
