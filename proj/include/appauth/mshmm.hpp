#pragma once

// Marginally smoothed HMM. Symbols seen in training use the learned
// emission; an unseen (app, tz, day) triple falls back to the product of the
// app's floored time-zone and day-flag marginals. Unknown apps and unseen
// markers get delta squared.

#include "appauth/encode.hpp"
#include "appauth/hmm.hpp"
#include "appauth/smoothing.hpp"

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace appauth {

struct MarginalTables {
    std::map<std::pair<std::string, TimeZoneBin>, double> p_app_tz;
    std::map<std::pair<std::string, DayFlag>, double> p_app_w;

    double app_tz(const std::string& app, TimeZoneBin tz) const;
    double app_w(const std::string& app, DayFlag day) const;
};

/// Fractions of all app symbols in `train` falling on each (app, tz) and
/// (app, day) key. Markers are excluded from the denominator.
MarginalTables compute_marginals(const ObservationSequence& train);

struct MsHmmModel {
    HmmModel base;  // unsmoothed emissions
    MarginalTables marginals;
    std::vector<bool> seen;         // per state index
    std::vector<double> fallback;   // emission for unseen symbols, per state index
    double delta = 0.0;
};

MsHmmModel build_mshmm(HmmModel base, const ObservationSequence& train, const Vocabulary& vocab,
                       const SmoothingConfig& config = {});

/// Seen symbols: max(b(s, o), delta^2). Unseen symbols: the precomputed
/// marginal product.
double mshmm_emission(const MsHmmModel& model, std::size_t state, StateIndex symbol);

double mshmm_log_likelihood(const MsHmmModel& model, std::span<const StateIndex> window);

}  // namespace appauth
