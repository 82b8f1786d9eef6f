#pragma once

// Discrete-emission hidden Markov model trained with Baum-Welch on a single
// observation sequence; scoring uses the scaled forward recursion.

#include "appauth/encode.hpp"
#include "appauth/smoothing.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace appauth {

struct HmmTrainingConfig {
    std::size_t hidden_states = 20;
    std::size_t max_iter = 50;
    double convergence_tol = 1e-6;  // per-symbol log-likelihood improvement
    std::uint64_t seed = 1;
};

struct HmmTrainingInfo {
    std::uint64_t seed = 0;
    std::size_t iterations = 0;  // M-steps performed
    bool converged = false;
    /// Log-likelihood of the training sequence before each M-step and after
    /// the last one.
    std::vector<double> log_likelihoods;
    double final_log_likelihood() const {
        return log_likelihoods.empty() ? 0.0 : log_likelihoods.back();
    }
};

struct HmmModel {
    std::size_t states = 0;   // K
    std::size_t symbols = 0;  // S
    /// Initial distribution used when scoring. Windows start at arbitrary
    /// positions, so this is the average posterior state occupancy over the
    /// training sequence rather than the posterior at t = 0.
    std::vector<double> pi;
    std::vector<double> trans;  // K x K
    std::vector<double> emit;   // K x S
    HmmTrainingInfo info;

    double a(std::size_t i, std::size_t j) const { return trans[i * states + j]; }
    double b(std::size_t k, StateIndex o) const { return emit[k * symbols + o]; }
};

/// Throws InvalidArgument for sequences shorter than 2 or symbols >= symbol_count.
HmmModel train_hmm(std::span<const StateIndex> train, std::size_t symbol_count,
                   const HmmTrainingConfig& config = {});

/// b'(s, o) = (b(s, o) + delta) / (1 + delta * S).
HmmModel laplace_smooth_emissions(HmmModel model, const SmoothingConfig& config = {});

using EmissionFn = std::function<double(std::size_t state, StateIndex symbol)>;

/// log P(window) under (pi, trans) and an arbitrary emission function.
/// Throws NumericError if a step has zero total probability.
double forward_log_likelihood(std::span<const double> pi, std::span<const double> trans,
                              std::size_t states, const EmissionFn& emission,
                              std::span<const StateIndex> window);

double forward_log_likelihood(const HmmModel& model, std::span<const StateIndex> window);

}  // namespace appauth
