#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wildsim {

/// Invalid parameters or malformed configuration input.
struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Algebraic singularity: a multiplier evaluated at its pole.
struct singular_error : std::domain_error {
    using std::domain_error::domain_error;
};

/// Instantaneous feedback has no fixed point (per-draw a >= 1),
/// or a simulated price trajectory became invalid. Carries the
/// offending step index.
struct explosion_error : std::runtime_error {
    std::size_t step;
    explicit explosion_error(const std::string& msg) : std::runtime_error(msg), step(0) {}
    explosion_error(const std::string& msg, std::size_t step_idx)
        : std::runtime_error(msg + " (step " + std::to_string(step_idx) + ")"),
          step(step_idx) {}
};

/// Not enough sample points above a threshold / in a tail to estimate.
struct insufficient_data_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An iterative numeric procedure failed to converge within its cap.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace wildsim
