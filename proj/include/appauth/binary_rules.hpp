#pragma once

// Hard-decision baselines: reject a window outright when it contains an
// unknown application (BinUnk) or any observation absent from training
// (BinUnfore). Session-start and day-change markers are ignored by BinUnk.

#include "appauth/encode.hpp"

#include <span>
#include <vector>

namespace appauth {

double score_binary_unknown(const Vocabulary& vocab, std::span<const ObservationSymbol> window);
double score_binary_unforeseen(const SymbolSet& train_symbols,
                               std::span<const ObservationSymbol> window);

struct BinUnkModel {
    StateIndex unknown_begin = 0;  // [begin, begin + 6) is the U block
};

struct BinUnforeModel {
    std::vector<bool> seen;  // indexed by state
};

double score_binary_unknown(const BinUnkModel& model, std::span<const StateIndex> window);
double score_binary_unforeseen(const BinUnforeModel& model, std::span<const StateIndex> window);

}  // namespace appauth
