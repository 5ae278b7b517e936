#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "duosim/bargaining.hpp"
#include "duosim/losses.hpp"

namespace duosim {

enum class Scheme { complete, one_sided_high, one_sided_low, defection_free };

/// "defection-free" style names; underscores are accepted when parsing.
std::string to_string(Scheme s);
Scheme parse_scheme(const std::string& name);

/// Parameters and per-firm qualities at a round. q_low/q_high follow firm
/// identity, so after a crossing in one_sided_high q_low can exceed q_high.
struct TrainingState {
    int round = 0;
    ModelParams x_low;
    ModelParams x_high;
    double q_low = 0.0;
    double q_high = 0.0;

    double rho() const { return q_high > 0.0 ? q_low / q_high : 0.0; }
};

struct RoundRecord {
    int round = 0;
    double q_l = 0.0, q_h = 0.0, rho = 0.0;
    double p_l = 0.0, p_h = 0.0;
    double u_l = 0.0, u_h = 0.0;
    double nash_value = 0.0;
    double alpha_l = 0.0, alpha_h = 0.0;
    bool defected_l = false, defected_h = false;

    friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

struct SchemeConfig {
    Scheme scheme = Scheme::defection_free;
    int rounds = 500;
    // <= 0 means "compute with compute_tilde_b".
    double tilde_b = 0.0;
    // Defaults to solve_nash at q_h_max = 1 - optimum_value.
    std::optional<NashSolution> target;
    double tolerance = 1e-9;  // revenue drop that counts as defection
    int max_inner = 100;
    int max_halvings = 30;
    // Throw DefectionDetected if a provably defection-free scheme defects.
    bool enforce_defection_free = true;
};

struct RunResult {
    std::vector<RoundRecord> records;  // rounds + 1 entries, round 0 first
    NashSolution target;
    double tilde_b = 0.0;
    double smoothness = 0.0;
    TrainingState final_state;
};

class DefectionDetected : public std::logic_error {
public:
    DefectionDetected(const std::string& what, std::vector<RoundRecord> records)
        : std::logic_error(what), records_(std::move(records)) {}
    const std::vector<RoundRecord>& records() const noexcept { return records_; }

private:
    std::vector<RoundRecord> records_;
};

/// Largest post-update ratio q_l/q_h that leaves the high firm's revenue
/// intact when q_h grows by the factor b from ratio a. B(a, 1) = a.
/// Throws std::domain_error outside 0 <= a < 1, b >= 1.
double bound_B(double a, double b);

struct ThresholdRoots {
    double root_high = 0.0;  // largest q_l keeping U_h at its previous level
    double root_low = 0.0;   // largest q_l keeping U_l at its previous level
};

/// Right-most roots of the two no-revenue-loss quadratics in q_l at
/// q_h = q_h_new. Requires q_prev.low() < q_prev.high() <= q_h_new.
ThresholdRoots threshold_roots(const QualityPair& q_prev, double q_h_new);

/// Cap on the low firm's quality after the high firm moved to q_h_new.
double hat_q_l(const QualityPair& q_prev, double q_h_new);

double alpha_low(double hat_q, double q_l_now, double grad_norm_sq);
double alpha_high(double q_h_now, double grad_norm_sq, double smoothness, double tilde_b);

struct TildeB {
    double tilde_b = 0.0;
    double argmin_rho = 0.0;
};

/// Per-round growth cap on q_h: the smallest over a rho grid of the largest
/// b for which (4 - 5 rho) log10 b <= B(rho, b) - rho still holds.
TildeB compute_tilde_b(double rho_grid_step = 1e-3, double b_search_max = 2.0);

/// b_rho for a single ratio, capped at b_search_max.
double growth_cap(double rho, double b_search_max = 2.0);

/// Round-0 state: the low firm at its own minimiser, the high firm at its own
/// minimiser advanced `warmup` steps of size 1/L on the average objective.
/// Throws InvalidTarget unless q_low < q_high.
TrainingState initial_state(const LossModel& model, int warmup = 0);

RunResult run_scheme(const SchemeConfig& cfg, const LossModel& model,
                     const TrainingState& initial);

}  // namespace duosim
