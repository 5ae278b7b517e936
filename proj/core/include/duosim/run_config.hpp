#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "duosim/losses.hpp"
#include "duosim/trainer.hpp"

namespace duosim {

enum class LossKind { quadratic, logistic };
enum class TraceFormat { csv, json };

std::string to_string(LossKind k);
std::string to_string(TraceFormat f);
LossKind parse_loss_kind(const std::string& s);
TraceFormat parse_trace_format(const std::string& s);

struct RunConfig {
    Scheme scheme = Scheme::defection_free;
    LossKind loss = LossKind::quadratic;
    int dim = 4;
    int rounds = 500;
    std::uint64_t seed = 0;
    double target_q_h_max = 0.75;

    // Quadratic generator
    double asymmetry = 0.3;
    // Logistic generator
    int n_per_firm = 200;
    double skew = 0.8;

    int warmup = 0;
    std::string out;
    TraceFormat format = TraceFormat::csv;

    // Tolerance overrides
    double tolerance = 1e-9;
    double tilde_b = 0.0;  // <= 0: computed
    int max_inner = 100;

    /// Throws ConfigError on out-of-range fields. `out` is not checked here.
    void validate() const;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Fields missing from the document keep the values already in `base`.
/// Unknown keys and type mismatches throw ConfigError.
RunConfig merge_config_json(const std::string& text, RunConfig base = {});
RunConfig load_config_file(const std::string& path, RunConfig base = {});
std::string config_to_json(const RunConfig& cfg);

std::shared_ptr<const LossModel> build_model(const RunConfig& cfg);
SchemeConfig scheme_config(const RunConfig& cfg);

}  // namespace duosim
