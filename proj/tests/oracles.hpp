#pragma once

// Brute-force reference computations used only by tests. They deliberately
// avoid the dynamic-programming code paths they check.

#include "appauth/edit_distance.hpp"
#include "appauth/encode.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace appauth::oracle {

/// log sum over all K^n hidden paths of pi(s0) b(s0,o0) prod a(s_{t-1},s_t) b(s_t,o_t).
inline double path_sum_log_likelihood(std::span<const double> pi, std::span<const double> trans,
                                      std::span<const double> emit, std::size_t K, std::size_t S,
                                      std::span<const StateIndex> obs) {
    const std::size_t n = obs.size();
    std::vector<std::size_t> path(n, 0);
    double total = 0.0;
    while (true) {
        double p = pi[path[0]] * emit[path[0] * S + obs[0]];
        for (std::size_t t = 1; t < n; ++t) {
            p *= trans[path[t - 1] * K + path[t]] * emit[path[t] * S + obs[t]];
        }
        total += p;
        std::size_t pos = 0;
        while (pos < n && ++path[pos] == K) path[pos++] = 0;
        if (pos == n) break;
    }
    return std::log(total);
}

/// Cheapest global alignment by exhaustive recursion over every edit script
/// (no memoisation).
inline int exhaustive_global_alignment(std::span<const ObservationSymbol> a,
                                       std::span<const ObservationSymbol> b) {
    if (a.empty()) return kIndelCost * static_cast<int>(b.size());
    if (b.empty()) return kIndelCost * static_cast<int>(a.size());
    const int sub = substitution_cost(a[0], b[0]) + exhaustive_global_alignment(a.subspan(1), b.subspan(1));
    const int del = kIndelCost + exhaustive_global_alignment(a.subspan(1), b);
    const int ins = kIndelCost + exhaustive_global_alignment(a, b.subspan(1));
    return std::min({sub, del, ins});
}

/// Minimum over every substring of `train` (including the empty one) of the
/// exhaustive global alignment cost against `window`.
inline int exhaustive_substring_distance(std::span<const ObservationSymbol> train,
                                         std::span<const ObservationSymbol> window) {
    int best = INT_MAX;
    for (std::size_t begin = 0; begin <= train.size(); ++begin) {
        for (std::size_t end = begin; end <= train.size(); ++end) {
            best = std::min(best, exhaustive_global_alignment(window, train.subspan(begin, end - begin)));
        }
    }
    return best;
}

}  // namespace appauth::oracle
