#include "appauth/edit_distance.hpp"

#include "appauth/error.hpp"

#include <algorithm>

namespace appauth {
namespace {

template <typename Cost>
int semi_global(std::size_t text_len, std::size_t pattern_len, Cost&& cost) {
    if (pattern_len == 0) throw InvalidArgument("M-ED window must be non-empty");
    if (pattern_len > text_len) {
        throw InvalidArgument("M-ED window (" + std::to_string(pattern_len) +
                              ") is longer than the training sequence (" +
                              std::to_string(text_len) + ")");
    }
    // prev[i]: best cost aligning pattern[0, j) so that it ends right before text[i].
    std::vector<int> prev(text_len + 1, 0);
    std::vector<int> cur(text_len + 1, 0);
    for (std::size_t j = 1; j <= pattern_len; ++j) {
        cur[0] = static_cast<int>(j) * kIndelCost;
        for (std::size_t i = 1; i <= text_len; ++i) {
            const int diag = prev[i - 1] + cost(j - 1, i - 1);
            const int up = prev[i] + kIndelCost;
            const int left = cur[i - 1] + kIndelCost;
            cur[i] = std::min({diag, up, left});
        }
        std::swap(prev, cur);
    }
    return *std::min_element(prev.begin(), prev.end());
}

int cost_from_fields(bool same_app, bool same_tz, bool same_day) {
    if (!same_app) return 3;
    if (same_tz && same_day) return 0;
    if (same_tz || same_day) return 1;
    return 2;
}

}  // namespace

int substitution_cost(const ObservationSymbol& u, const ObservationSymbol& v) {
    if (u == v) return 0;
    if (!u.carries_app() || !v.carries_app()) return 3;
    const bool same_app = u.kind == v.kind && (u.kind == SymbolKind::Unknown || u.app == v.app);
    return cost_from_fields(same_app, u.tz == v.tz, u.day == v.day);
}

std::vector<SymbolTraits> symbol_traits(const Vocabulary& vocab) {
    std::vector<SymbolTraits> traits(vocab.size());
    for (StateIndex i = 0; i < vocab.size(); ++i) {
        const auto sym = vocab.symbol_at(i);
        SymbolTraits& t = traits[i];
        t.kind = sym.kind;
        t.tz = sym.tz;
        t.day = sym.day;
        if (sym.kind == SymbolKind::App) {
            t.app = static_cast<int>(i / 6);
        } else if (sym.kind == SymbolKind::Unknown) {
            t.app = static_cast<int>(vocab.app_count());
        }
    }
    return traits;
}

int substitution_cost(const SymbolTraits& u, const SymbolTraits& v) {
    if (u.app == SymbolTraits::kNoApp || v.app == SymbolTraits::kNoApp) {
        return u.kind == v.kind ? 0 : 3;
    }
    return cost_from_fields(u.app == v.app, u.tz == v.tz, u.day == v.day);
}

MedModel train_med(const ObservationSequence& train, const Vocabulary& vocab) {
    if (train.size() == 0) throw InvalidArgument("M-ED needs a non-empty training sequence");
    return MedModel{to_indices(train, vocab), symbol_traits(vocab)};
}

int med_distance(const MedModel& model, std::span<const StateIndex> window) {
    // Substitution cost table restricted to the window's symbols.
    const std::size_t n_states = model.traits.size();
    std::vector<std::vector<int>> rows(window.size());
    for (std::size_t j = 0; j < window.size(); ++j) {
        if (window[j] >= n_states) throw InvalidArgument("window symbol outside vocabulary");
        rows[j].resize(n_states);
        const auto& w = model.traits[window[j]];
        for (std::size_t s = 0; s < n_states; ++s) rows[j][s] = substitution_cost(w, model.traits[s]);
    }
    const auto& text = model.train;
    return semi_global(text.size(), window.size(),
                       [&](std::size_t j, std::size_t i) { return rows[j][text[i]]; });
}

int med_distance(std::span<const ObservationSymbol> train,
                 std::span<const ObservationSymbol> window) {
    return semi_global(train.size(), window.size(), [&](std::size_t j, std::size_t i) {
        return substitution_cost(window[j], train[i]);
    });
}

double med_score(const MedModel& model, std::span<const StateIndex> window) {
    return -static_cast<double>(med_distance(model, window));
}

}  // namespace appauth
