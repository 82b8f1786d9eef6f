#pragma once

#include <cmath>

namespace appauth {

/// Probability floor assigned to unknown and unforeseen events.
struct SmoothingConfig {
    double delta = std::exp(-20.0);
};

/// Throws InvalidArgument unless 0 < delta < 1.
void validate(const SmoothingConfig& config);

}  // namespace appauth
