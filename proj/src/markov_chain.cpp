#include "appauth/markov_chain.hpp"

#include "appauth/error.hpp"

#include <cmath>

namespace appauth {

void MarkovChainModel::refresh_logs() {
    log_prior.resize(prior.size());
    log_transition.resize(transition.size());
    for (std::size_t i = 0; i < prior.size(); ++i) log_prior[i] = std::log(prior[i]);
    for (std::size_t i = 0; i < transition.size(); ++i) log_transition[i] = std::log(transition[i]);
}

MarkovChainModel train_markov_chain(std::span<const StateIndex> train, std::size_t states,
                                    const SmoothingConfig& config) {
    validate(config);
    if (train.empty()) throw InvalidArgument("Markov chain needs a non-empty training sequence");
    if (states == 0) throw InvalidArgument("Markov chain needs at least one state");

    std::vector<double> unigram(states, 0.0);
    std::vector<double> pairs(states * states, 0.0);
    std::vector<double> outgoing(states, 0.0);
    for (std::size_t t = 0; t < train.size(); ++t) {
        if (train[t] >= states) throw InvalidArgument("training symbol outside vocabulary");
        unigram[train[t]] += 1.0;
        if (t > 0) {
            pairs[train[t - 1] * states + train[t]] += 1.0;
            outgoing[train[t - 1]] += 1.0;
        }
    }

    const double delta = config.delta;
    const double s = static_cast<double>(states);
    MarkovChainModel model;
    model.states = states;
    model.delta = delta;
    model.prior.resize(states);
    const double prior_den = static_cast<double>(train.size()) + delta * s;
    for (std::size_t i = 0; i < states; ++i) model.prior[i] = (unigram[i] + delta) / prior_den;

    model.transition.resize(states * states);
    for (std::size_t i = 0; i < states; ++i) {
        const double den = outgoing[i] + delta * s;
        for (std::size_t j = 0; j < states; ++j) {
            model.transition[i * states + j] = (pairs[i * states + j] + delta) / den;
        }
    }
    model.refresh_logs();
    return model;
}

double mc_log_likelihood(const MarkovChainModel& model, std::span<const StateIndex> window) {
    if (window.empty()) throw InvalidArgument("cannot score an empty window");
    for (StateIndex s : window) {
        if (s >= model.states) throw InvalidArgument("window symbol outside vocabulary");
    }
    double score = model.log_prior[window[0]];
    for (std::size_t k = 1; k < window.size(); ++k) {
        score += model.log_transition[window[k - 1] * model.states + window[k]];
    }
    return score;
}

}  // namespace appauth
