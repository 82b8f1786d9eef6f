#pragma once

// Modified edit distance (M-ED): weighted semi-global alignment of a test
// window against a user's training sequence. Substitutions cost 1 when only
// the time zone or only the day flag differs, 2 when both differ and 3 when
// the application differs. Insertions and deletions cost 3. Leading and
// trailing training symbols are free, so a verbatim occurrence scores 0.

#include "appauth/encode.hpp"

#include <span>
#include <vector>

namespace appauth {

inline constexpr int kIndelCost = 3;

int substitution_cost(const ObservationSymbol& u, const ObservationSymbol& v);

/// Per-state attributes needed to evaluate substitution costs on indices.
struct SymbolTraits {
    static constexpr int kNoApp = -1;
    int app = kNoApp;  // position in the vocabulary, app_count() for U
    SymbolKind kind = SymbolKind::SessionStart;
    TimeZoneBin tz = TimeZoneBin::TZ1;
    DayFlag day = DayFlag::Weekday;
};

std::vector<SymbolTraits> symbol_traits(const Vocabulary& vocab);

int substitution_cost(const SymbolTraits& u, const SymbolTraits& v);

struct MedModel {
    std::vector<StateIndex> train;  // projected training sequence
    std::vector<SymbolTraits> traits;
};

MedModel train_med(const ObservationSequence& train, const Vocabulary& vocab);

/// Throws InvalidArgument when the window is empty or longer than the
/// training sequence.
int med_distance(const MedModel& model, std::span<const StateIndex> window);

/// Symbol-level variant of the same alignment.
int med_distance(std::span<const ObservationSymbol> train,
                 std::span<const ObservationSymbol> window);

/// Negated distance, so that higher means more genuine.
double med_score(const MedModel& model, std::span<const StateIndex> window);

}  // namespace appauth
