#pragma once

#include <stdexcept>
#include <string>

namespace duosim {

/// A formula needs q_l > 0 and q_h > q_l but the pair collapses.
/// Callers fall back to the degenerate (zero-price) equilibrium.
class DegenerateQualities : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// No quality of the low firm satisfies both bargaining constraints.
class InfeasibleDisagreement : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A loss generator cannot hit the requested optimum while keeping losses in [0,1].
class InvalidTarget : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Bad run configuration (flags, config file, out-of-range values).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace duosim
