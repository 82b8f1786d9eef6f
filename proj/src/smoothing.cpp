#include "appauth/smoothing.hpp"

#include "appauth/error.hpp"

namespace appauth {

void validate(const SmoothingConfig& config) {
    if (!(config.delta > 0.0 && config.delta < 1.0)) {
        throw InvalidArgument("smoothing delta must lie in (0, 1)");
    }
}

}  // namespace appauth
