#include "duosim/trainer.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <sstream>

#include "duosim/errors.hpp"

namespace duosim {
namespace {

// Right-most root of a x^2 + b x + c, computed without cancellation.
double rightmost_root(double a, double b, double c, const char* who) {
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) throw std::domain_error(std::string(who) + ": negative discriminant");
    if (a == 0.0) return -c / b;
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    const double r1 = q / a;
    const double r2 = q != 0.0 ? c / q : r1;
    return std::max(r1, r2);
}

struct FirmUtilities {
    double p_l, p_h, u_l, u_h;
};

// Market quantities per firm identity; roles follow the current quality order.
FirmUtilities firm_utilities(double q_l, double q_h) {
    const Market market;
    if (q_l <= q_h) {
        const MarketOutcome m = market.equilibrium_outcome(QualityPair(q_l, q_h));
        return {m.prices.low, m.prices.high, m.utility_low, m.utility_high};
    }
    const MarketOutcome m = market.equilibrium_outcome(QualityPair(q_h, q_l));
    return {m.prices.high, m.prices.low, m.utility_high, m.utility_low};
}

double checked_quality(const LossModel& model, const ModelParams& x) {
    const double q = model.quality(x);
    if (!(q >= 0.0 && q <= 1.0)) {
        std::ostringstream os;
        os << "quality " << q << " left [0,1]; the loss model's range control failed";
        throw std::logic_error(os.str());
    }
    return q;
}

class Runner {
public:
    Runner(const SchemeConfig& cfg, const LossModel& model, const TrainingState& init)
        : cfg_(cfg), model_(model), state_(init), L_(model.smoothness()) {
        if (cfg.rounds < 1) throw ConfigError("rounds must be >= 1");
        if (!(init.q_low <= init.q_high)) {
            throw std::invalid_argument("run_scheme: initial state needs q_low <= q_high");
        }
        tilde_b_ = cfg.tilde_b > 0.0 ? cfg.tilde_b : compute_tilde_b().tilde_b;
        if (!(tilde_b_ > 1.0)) throw ConfigError("tilde_b must exceed 1");

        const DisagreementPoint d(QualityPair(init.q_low, init.q_high));
        u_l0_ = d.u_low();
        u_h0_ = d.u_high();
        target_ = cfg.target ? *cfg.target : solve_nash(d, 1.0 - model.optimum_value());
    }

    RunResult run() {
        records_.reserve(static_cast<std::size_t>(cfg_.rounds) + 1);
        record(0.0, 0.0);
        for (int t = 1; t <= cfg_.rounds; ++t) {
            state_.round = t;
            switch (cfg_.scheme) {
                case Scheme::complete: step_complete(); break;
                case Scheme::one_sided_low: step_one_sided_low(); break;
                case Scheme::one_sided_high: step_one_sided_high(); break;
                case Scheme::defection_free: step_defection_free(); break;
            }
        }
        RunResult out;
        out.records = std::move(records_);
        out.target = target_;
        out.tilde_b = tilde_b_;
        out.smoothness = L_;
        out.final_state = state_;
        return out;
    }

private:
    double gd_step(ModelParams& x, double alpha) {
        x -= alpha * model_.average_gradient(x);
        return checked_quality(model_, x);
    }

    void step_complete() {
        state_.q_low = gd_step(state_.x_low, 1.0 / L_);
        state_.q_high = gd_step(state_.x_high, 1.0 / L_);
        record(1.0 / L_, 1.0 / L_);
    }

    void step_one_sided_low() {
        state_.q_high = gd_step(state_.x_high, 1.0 / L_);
        record(0.0, 1.0 / L_);
    }

    void step_one_sided_high() {
        state_.q_low = gd_step(state_.x_low, 1.0 / L_);
        record(1.0 / L_, 0.0);
    }

    void step_defection_free() {
        // High firm: paced gradient step.
        const ModelParams g_h = model_.average_gradient(state_.x_high);
        const double a_h = alpha_high(state_.q_high, g_h.squaredNorm(), L_, tilde_b_);
        state_.x_high -= a_h * g_h;
        const double q_h_prev = state_.q_high;
        const double q_h_new = checked_quality(model_, state_.x_high);
        state_.q_high = q_h_new;

        // Low firm: gated on the pre-update q_l against the new q_h.
        double a_l_total = 0.0;
        const double q_l = state_.q_low;
        if (q_l < target_.q_low && q_l / q_h_new <= target_.ratio && q_l < q_h_prev &&
            q_h_new >= q_h_prev) {
            const double cap = hat_q_l(QualityPair(q_l, q_h_prev), q_h_new);
            const double goal = std::min(cap, target_.ratio * q_h_new);
            a_l_total = climb_low(goal);
        }
        record(a_l_total, a_h);
    }

    // Inner loop: step the low model until its quality reaches goal, never past it.
    double climb_low(double goal) {
        double total = 0.0;
        for (int it = 0; it < cfg_.max_inner; ++it) {
            if (state_.q_low >= goal) break;
            const ModelParams g = model_.average_gradient(state_.x_low);
            double a = std::min(alpha_low(goal, state_.q_low, g.squaredNorm()), 1.0 / L_);
            if (a <= 0.0) break;
            bool accepted = false;
            for (int h = 0; h <= cfg_.max_halvings; ++h, a *= 0.5) {
                const ModelParams trial = state_.x_low - a * g;
                const double q = checked_quality(model_, trial);
                if (q <= goal) {
                    if (q <= state_.q_low) break;  // no progress left at this scale
                    state_.x_low = trial;
                    state_.q_low = q;
                    total += a;
                    accepted = true;
                    break;
                }
            }
            if (!accepted) break;
        }
        return total;
    }

    void record(double alpha_l, double alpha_h) {
        const FirmUtilities f = firm_utilities(state_.q_low, state_.q_high);
        RoundRecord r;
        r.round = state_.round;
        r.q_l = state_.q_low;
        r.q_h = state_.q_high;
        r.rho = state_.rho();
        r.p_l = f.p_l;
        r.p_h = f.p_h;
        r.u_l = f.u_l;
        r.u_h = f.u_h;
        r.nash_value = (f.u_l - u_l0_) * (f.u_h - u_h0_);
        r.alpha_l = alpha_l;
        r.alpha_h = alpha_h;
        if (!records_.empty()) {
            const RoundRecord& prev = records_.back();
            r.defected_l = r.u_l < prev.u_l - cfg_.tolerance;
            r.defected_h = r.u_h < prev.u_h - cfg_.tolerance;
        }
        records_.push_back(r);

        const bool guarded =
            cfg_.scheme == Scheme::defection_free || cfg_.scheme == Scheme::one_sided_low;
        if (guarded && cfg_.enforce_defection_free && (r.defected_l || r.defected_h)) {
            std::ostringstream os;
            os << to_string(cfg_.scheme) << ": firm " << (r.defected_l ? "low" : "high")
               << " lost revenue at round " << r.round;
            throw DefectionDetected(os.str(), records_);
        }
    }

    const SchemeConfig& cfg_;
    const LossModel& model_;
    TrainingState state_;
    double L_;
    double tilde_b_ = 0.0;
    double u_l0_ = 0.0, u_h0_ = 0.0;
    NashSolution target_;
    std::vector<RoundRecord> records_;
};

}  // namespace

std::string to_string(Scheme s) {
    switch (s) {
        case Scheme::complete: return "complete";
        case Scheme::one_sided_high: return "one-sided-high";
        case Scheme::one_sided_low: return "one-sided-low";
        case Scheme::defection_free: return "defection-free";
    }
    return "unknown";
}

Scheme parse_scheme(const std::string& name) {
    std::string n = name;
    std::replace(n.begin(), n.end(), '_', '-');
    for (Scheme s : {Scheme::complete, Scheme::one_sided_high, Scheme::one_sided_low,
                     Scheme::defection_free}) {
        if (n == to_string(s)) return s;
    }
    throw ConfigError("unknown scheme '" + name + "'");
}

ThresholdRoots threshold_roots(const QualityPair& q_prev, double q_h_new) {
    if (!(q_prev.low() < q_prev.high() && q_prev.high() <= q_h_new)) {
        throw std::domain_error("threshold_roots: need q_l < q_h <= q_h_new");
    }
    const double q = q_h_new;
    const double u_h = high_utility(q_prev.low(), q_prev.high());
    const double u_l = low_utility(q_prev.low(), q_prev.high());

    ThresholdRoots r;
    // u_h (4q - x)^2 = 4 q^2 (q - x)
    r.root_high = rightmost_root(u_h, 4.0 * q * q - 8.0 * u_h * q, 16.0 * u_h * q * q - 4.0 * q * q * q,
                                 "threshold_roots");
    // x q (q - x) = u_l (4q - x)^2
    r.root_low = rightmost_root(q + u_l, -(q * q + 8.0 * u_l * q), 16.0 * u_l * q * q,
                                "threshold_roots");
    return r;
}

double hat_q_l(const QualityPair& q_prev, double q_h_new) {
    if (!(q_prev.high() > 0.0 && q_h_new >= q_prev.high())) {
        throw std::domain_error("hat_q_l: need 0 < q_h <= q_h_new");
    }
    return bound_B(q_prev.ratio(), q_h_new / q_prev.high()) * q_h_new;
}

double alpha_low(double hat_q, double q_l_now, double grad_norm_sq) {
    if (grad_norm_sq <= 0.0 || hat_q <= q_l_now) return 0.0;
    return std::min((hat_q - q_l_now) / grad_norm_sq, 1.0);
}

double alpha_high(double q_h_now, double grad_norm_sq, double smoothness, double tilde_b) {
    const double cap = 1.0 / smoothness;
    if (grad_norm_sq <= 0.0) return cap;
    return std::min((tilde_b - 1.0) * q_h_now / grad_norm_sq, cap);
}

TrainingState initial_state(const LossModel& model, int warmup) {
    if (warmup < 0) throw std::invalid_argument("initial_state: warmup must be >= 0");
    TrainingState s;
    s.x_low = model.own_minimizer(Owner::low);
    s.x_high = model.own_minimizer(Owner::high);
    const double step = 1.0 / model.smoothness();
    for (int k = 0; k < warmup; ++k) s.x_high -= step * model.average_gradient(s.x_high);
    s.q_low = model.quality(s.x_low);
    s.q_high = model.quality(s.x_high);
    if (!(s.q_low >= 0.0 && s.q_high <= 1.0 && s.q_low < s.q_high)) {
        std::ostringstream os;
        os << "initial qualities (" << s.q_low << ", " << s.q_high
           << ") do not satisfy 0 <= q_l < q_h <= 1";
        throw InvalidTarget(os.str());
    }
    return s;
}

RunResult run_scheme(const SchemeConfig& cfg, const LossModel& model, const TrainingState& initial) {
    return Runner(cfg, model, initial).run();
}

}  // namespace duosim
