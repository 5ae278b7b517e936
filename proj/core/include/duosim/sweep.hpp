#pragma once

#include <vector>

#include "duosim/trace.hpp"

namespace duosim {

/// Runs every config independently, on up to `threads` workers (0 picks the
/// hardware concurrency). Output order follows input order and each trace
/// depends only on its own config. A failing run yields a trace whose
/// summary.error is set; records hold whatever was produced before the failure.
std::vector<Trace> sweep(const std::vector<RunConfig>& configs, unsigned threads = 0);

}  // namespace duosim
