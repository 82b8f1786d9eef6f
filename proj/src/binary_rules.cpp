#include "appauth/binary_rules.hpp"

namespace appauth {

double score_binary_unknown(const Vocabulary& vocab, std::span<const ObservationSymbol> window) {
    for (const auto& s : window) {
        if (s.kind == SymbolKind::Unknown) return 0.0;
        if (s.kind == SymbolKind::App && !vocab.contains_app(s.app)) return 0.0;
    }
    return 1.0;
}

double score_binary_unforeseen(const SymbolSet& train_symbols,
                               std::span<const ObservationSymbol> window) {
    for (const auto& s : window) {
        if (is_unforeseen(s, train_symbols)) return 0.0;
    }
    return 1.0;
}

double score_binary_unknown(const BinUnkModel& model, std::span<const StateIndex> window) {
    for (StateIndex s : window) {
        if (s >= model.unknown_begin && s < model.unknown_begin + 6) return 0.0;
    }
    return 1.0;
}

double score_binary_unforeseen(const BinUnforeModel& model, std::span<const StateIndex> window) {
    for (StateIndex s : window) {
        if (s >= model.seen.size() || !model.seen[s]) return 0.0;
    }
    return 1.0;
}

}  // namespace appauth
