#include "appauth/hmm.hpp"

#include "appauth/error.hpp"
#include "appauth/random.hpp"

#include <cmath>
#include <numeric>

namespace appauth {
namespace {

void random_simplex(Rng& rng, std::span<double> row) {
    double sum = 0.0;
    for (double& v : row) {
        v = uniform_open0(rng);
        sum += v;
    }
    for (double& v : row) v /= sum;
}

// Expected sufficient statistics of one E-step.
struct EStep {
    double log_likelihood = 0.0;
    std::vector<double> gamma_first;  // K
    std::vector<double> gamma_sum;    // K, over all t
    std::vector<double> gamma_head;   // K, over t < T-1
    std::vector<double> xi_sum;       // K x K
    std::vector<double> emit_num;     // K x S
};

EStep expectation(const HmmModel& m, std::span<const StateIndex> obs) {
    const std::size_t K = m.states;
    const std::size_t T = obs.size();
    std::vector<double> alpha(T * K), beta(T * K), scale(T);

    for (std::size_t k = 0; k < K; ++k) alpha[k] = m.pi[k] * m.b(k, obs[0]);
    for (std::size_t t = 0;; ++t) {
        double c = 0.0;
        for (std::size_t k = 0; k < K; ++k) c += alpha[t * K + k];
        if (!(c > 0.0) || !std::isfinite(c)) {
            throw NumericError("Baum-Welch: zero-probability forward step at t=" + std::to_string(t));
        }
        scale[t] = c;
        for (std::size_t k = 0; k < K; ++k) alpha[t * K + k] /= c;
        if (t + 1 == T) break;
        for (std::size_t j = 0; j < K; ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i < K; ++i) acc += alpha[t * K + i] * m.a(i, j);
            alpha[(t + 1) * K + j] = acc * m.b(j, obs[t + 1]);
        }
    }

    for (std::size_t k = 0; k < K; ++k) beta[(T - 1) * K + k] = 1.0;
    std::vector<double> tmp(K);
    for (std::size_t t = T - 1; t-- > 0;) {
        for (std::size_t j = 0; j < K; ++j) {
            tmp[j] = m.b(j, obs[t + 1]) * beta[(t + 1) * K + j] / scale[t + 1];
        }
        for (std::size_t i = 0; i < K; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < K; ++j) acc += m.a(i, j) * tmp[j];
            beta[t * K + i] = acc;
        }
    }

    EStep e;
    e.gamma_first.assign(K, 0.0);
    e.gamma_sum.assign(K, 0.0);
    e.gamma_head.assign(K, 0.0);
    e.xi_sum.assign(K * K, 0.0);
    e.emit_num.assign(K * m.symbols, 0.0);
    for (std::size_t t = 0; t < T; ++t) e.log_likelihood += std::log(scale[t]);

    for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t k = 0; k < K; ++k) {
            const double g = alpha[t * K + k] * beta[t * K + k];
            if (t == 0) e.gamma_first[k] = g;
            e.gamma_sum[k] += g;
            if (t + 1 < T) e.gamma_head[k] += g;
            e.emit_num[k * m.symbols + obs[t]] += g;
        }
        if (t + 1 == T) continue;
        for (std::size_t j = 0; j < K; ++j) {
            tmp[j] = m.b(j, obs[t + 1]) * beta[(t + 1) * K + j] / scale[t + 1];
        }
        for (std::size_t i = 0; i < K; ++i) {
            const double ai = alpha[t * K + i];
            if (ai == 0.0) continue;
            for (std::size_t j = 0; j < K; ++j) e.xi_sum[i * K + j] += ai * m.a(i, j) * tmp[j];
        }
    }
    return e;
}

void maximization(HmmModel& m, const EStep& e) {
    const std::size_t K = m.states;
    const std::size_t S = m.symbols;
    const double first_total = std::accumulate(e.gamma_first.begin(), e.gamma_first.end(), 0.0);
    for (std::size_t k = 0; k < K; ++k) m.pi[k] = e.gamma_first[k] / first_total;

    // Rows with no expected visits keep their previous parameters.
    for (std::size_t i = 0; i < K; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < K; ++j) row += e.xi_sum[i * K + j];
        if (row > 0.0) {
            for (std::size_t j = 0; j < K; ++j) m.trans[i * K + j] = e.xi_sum[i * K + j] / row;
        }
    }
    for (std::size_t k = 0; k < K; ++k) {
        double row = 0.0;
        for (std::size_t o = 0; o < S; ++o) row += e.emit_num[k * S + o];
        if (row > 0.0) {
            for (std::size_t o = 0; o < S; ++o) m.emit[k * S + o] = e.emit_num[k * S + o] / row;
        }
    }
}

template <typename Emission>
double forward_impl(std::span<const double> pi, std::span<const double> trans, std::size_t K,
                    Emission&& emission, std::span<const StateIndex> window) {
    if (window.empty()) throw InvalidArgument("cannot score an empty window");
    std::vector<double> alpha(K), next(K);
    double log_likelihood = 0.0;
    for (std::size_t t = 0; t < window.size(); ++t) {
        const StateIndex o = window[t];
        double c = 0.0;
        for (std::size_t j = 0; j < K; ++j) {
            double pred;
            if (t == 0) {
                pred = pi[j];
            } else {
                pred = 0.0;
                for (std::size_t i = 0; i < K; ++i) pred += alpha[i] * trans[i * K + j];
            }
            next[j] = pred * emission(j, o);
            c += next[j];
        }
        if (!(c > 0.0) || !std::isfinite(c)) {
            throw NumericError("forward recursion: zero-probability step");
        }
        for (std::size_t j = 0; j < K; ++j) alpha[j] = next[j] / c;
        log_likelihood += std::log(c);
    }
    return log_likelihood;
}

}  // namespace

HmmModel train_hmm(std::span<const StateIndex> train, std::size_t symbol_count,
                   const HmmTrainingConfig& config) {
    if (train.size() < 2) throw InvalidArgument("HMM training needs at least 2 observations");
    if (config.hidden_states == 0) throw InvalidArgument("HMM needs at least one hidden state");
    if (symbol_count == 0) throw InvalidArgument("HMM needs a non-empty alphabet");
    for (StateIndex o : train) {
        if (o >= symbol_count) throw InvalidArgument("training symbol outside alphabet");
    }

    const std::size_t K = config.hidden_states;
    const std::size_t S = symbol_count;
    HmmModel m;
    m.states = K;
    m.symbols = S;
    m.pi.resize(K);
    m.trans.resize(K * K);
    m.emit.resize(K * S);
    Rng rng(config.seed);
    random_simplex(rng, m.pi);
    for (std::size_t i = 0; i < K; ++i) random_simplex(rng, std::span(m.trans).subspan(i * K, K));
    for (std::size_t k = 0; k < K; ++k) random_simplex(rng, std::span(m.emit).subspan(k * S, S));

    m.info.seed = config.seed;
    const double T = static_cast<double>(train.size());
    EStep e = expectation(m, train);
    m.info.log_likelihoods.push_back(e.log_likelihood);
    while (m.info.iterations < config.max_iter) {
        maximization(m, e);
        ++m.info.iterations;
        const double previous = e.log_likelihood;
        e = expectation(m, train);
        m.info.log_likelihoods.push_back(e.log_likelihood);
        if ((e.log_likelihood - previous) / T < config.convergence_tol) {
            m.info.converged = true;
            break;
        }
    }

    const double total = std::accumulate(e.gamma_sum.begin(), e.gamma_sum.end(), 0.0);
    for (std::size_t k = 0; k < K; ++k) m.pi[k] = e.gamma_sum[k] / total;
    return m;
}

HmmModel laplace_smooth_emissions(HmmModel model, const SmoothingConfig& config) {
    validate(config);
    const double den = 1.0 + config.delta * static_cast<double>(model.symbols);
    for (double& b : model.emit) b = (b + config.delta) / den;
    return model;
}

double forward_log_likelihood(std::span<const double> pi, std::span<const double> trans,
                              std::size_t states, const EmissionFn& emission,
                              std::span<const StateIndex> window) {
    return forward_impl(pi, trans, states, emission, window);
}

double forward_log_likelihood(const HmmModel& model, std::span<const StateIndex> window) {
    for (StateIndex o : window) {
        if (o >= model.symbols) throw InvalidArgument("window symbol outside alphabet");
    }
    return forward_impl(model.pi, model.trans, model.states,
                        [&](std::size_t k, StateIndex o) { return model.b(k, o); }, window);
}

namespace detail {
// Shared with the MSHMM scorer to avoid a std::function call per cell.
double forward_with(const HmmModel& model, std::span<const StateIndex> window,
                    const std::vector<bool>& seen, const std::vector<double>& fallback,
                    double floor) {
    return forward_impl(
        model.pi, model.trans, model.states,
        [&](std::size_t k, StateIndex o) {
            if (!seen[o]) return fallback[o];
            const double b = model.b(k, o);
            return b > floor ? b : floor;
        },
        window);
}
}  // namespace detail

}  // namespace appauth
