#include "appauth/mshmm.hpp"

#include "appauth/error.hpp"

#include <algorithm>

namespace appauth {

namespace detail {
double forward_with(const HmmModel& model, std::span<const StateIndex> window,
                    const std::vector<bool>& seen, const std::vector<double>& fallback,
                    double floor);
}  // namespace detail

double MarginalTables::app_tz(const std::string& app, TimeZoneBin tz) const {
    const auto it = p_app_tz.find({app, tz});
    return it == p_app_tz.end() ? 0.0 : it->second;
}

double MarginalTables::app_w(const std::string& app, DayFlag day) const {
    const auto it = p_app_w.find({app, day});
    return it == p_app_w.end() ? 0.0 : it->second;
}

MarginalTables compute_marginals(const ObservationSequence& train) {
    MarginalTables tables;
    std::size_t total = 0;
    for (const auto& s : train.symbols) {
        if (s.kind != SymbolKind::App) continue;
        tables.p_app_tz[{s.app, s.tz}] += 1.0;
        tables.p_app_w[{s.app, s.day}] += 1.0;
        ++total;
    }
    if (total == 0) throw InvalidArgument("marginals need at least one app symbol");
    for (auto& [key, v] : tables.p_app_tz) v /= static_cast<double>(total);
    for (auto& [key, v] : tables.p_app_w) v /= static_cast<double>(total);
    return tables;
}

MsHmmModel build_mshmm(HmmModel base, const ObservationSequence& train, const Vocabulary& vocab,
                       const SmoothingConfig& config) {
    validate(config);
    if (base.symbols != vocab.size()) {
        throw InvalidArgument("MSHMM base model alphabet does not match the vocabulary");
    }
    MsHmmModel model;
    model.base = std::move(base);
    model.marginals = compute_marginals(train);
    model.delta = config.delta;

    const std::size_t S = vocab.size();
    model.seen.assign(S, false);
    for (StateIndex idx : to_indices(train, vocab)) model.seen[idx] = true;

    const double d = config.delta;
    model.fallback.assign(S, d * d);
    for (StateIndex i = 0; i < S; ++i) {
        const auto sym = vocab.symbol_at(i);
        if (sym.kind != SymbolKind::App) continue;
        model.fallback[i] = std::max(d, model.marginals.app_tz(sym.app, sym.tz)) *
                            std::max(d, model.marginals.app_w(sym.app, sym.day));
    }
    return model;
}

double mshmm_emission(const MsHmmModel& model, std::size_t state, StateIndex symbol) {
    if (symbol >= model.seen.size() || state >= model.base.states) {
        throw InvalidArgument("mshmm_emission: index out of range");
    }
    if (!model.seen[symbol]) return model.fallback[symbol];
    return std::max(model.base.b(state, symbol), model.delta * model.delta);
}

double mshmm_log_likelihood(const MsHmmModel& model, std::span<const StateIndex> window) {
    for (StateIndex o : window) {
        if (o >= model.seen.size()) throw InvalidArgument("window symbol outside vocabulary");
    }
    return detail::forward_with(model.base, window, model.seen, model.fallback,
                                model.delta * model.delta);
}

}  // namespace appauth
