#pragma once

#include <string>
#include <vector>

#include "duosim/run_config.hpp"
#include "duosim/trainer.hpp"

namespace duosim {

struct TraceSummary {
    NashSolution target;
    double tilde_b = 0.0;
    double smoothness = 0.0;
    double q_h_gap = 0.0;     // q_h* - q_{h,T}
    double rho_gap = 0.0;     // |rho* - rho_T|
    double nash_gap = 0.0;    // N(q*) - N(q_T)
    int defections_l = 0;
    int defections_h = 0;
    double wall_seconds = 0.0;
    std::string error;        // empty unless the run aborted
};

/// A scheme run: the configuration that produced it, one record per round
/// (round 0 is the initial state) and summary figures.
struct Trace {
    RunConfig config;
    std::vector<RoundRecord> records;
    TraceSummary summary;
};

/// Build the model from the config, run the scheme and summarise. Lets
/// ConfigError, InvalidTarget and DefectionDetected escape.
Trace execute(const RunConfig& cfg);

/// Fill the summary fields that derive from records and the target.
void summarise(Trace& trace);

std::string serialize_csv(const Trace& t);
std::string serialize_json(const Trace& t);
std::string serialize(const Trace& t, TraceFormat f);

/// Inverse of the serialisers; throws std::runtime_error on malformed input.
Trace parse_csv(const std::string& text);
Trace parse_json(const std::string& text);
/// Picks the format from the first non-blank character.
Trace parse_trace(const std::string& text);

void write_trace(const Trace& t, const std::string& path, TraceFormat f);
Trace read_trace(const std::string& path);

}  // namespace duosim
