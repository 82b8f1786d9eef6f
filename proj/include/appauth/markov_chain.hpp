#pragma once

#include "appauth/encode.hpp"
#include "appauth/smoothing.hpp"

#include <span>
#include <vector>

namespace appauth {

/// First-order Markov chain over the observation states with a
/// delta-smoothed unigram prior and delta-smoothed transition rows.
struct MarkovChainModel {
    std::size_t states = 0;
    double delta = 0.0;
    std::vector<double> prior;       // states
    std::vector<double> transition;  // states x states, row-major

    // Cached logarithms used for scoring.
    std::vector<double> log_prior;
    std::vector<double> log_transition;

    double tau(StateIndex from, StateIndex to) const { return transition[from * states + to]; }
    void refresh_logs();
};

/// `train` must already be projected onto a vocabulary of `states` symbols.
MarkovChainModel train_markov_chain(std::span<const StateIndex> train, std::size_t states,
                                    const SmoothingConfig& config = {});

/// log p(i0) + sum_k log tau(i_{k-1}, i_k).
double mc_log_likelihood(const MarkovChainModel& model, std::span<const StateIndex> window);

}  // namespace appauth
