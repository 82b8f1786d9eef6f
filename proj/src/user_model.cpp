#include "appauth/user_model.hpp"

#include "appauth/error.hpp"

#include <json.hpp>

#include <cstdio>
#include <istream>
#include <ostream>

namespace appauth {

using nlohmann::json;

std::string_view method_tag(Method method) {
    switch (method) {
        case Method::BinUnk: return "bin-unk";
        case Method::BinUnfore: return "bin-unfore";
        case Method::Med: return "med";
        case Method::MarkovChain: return "mc";
        case Method::HmmLap: return "hmm-lap";
        case Method::MsHmm: return "mshmm";
    }
    return "?";
}

Method parse_method(std::string_view tag) {
    for (Method m : kAllMethods) {
        if (method_tag(m) == tag) return m;
    }
    throw InvalidArgument("unknown method '" + std::string(tag) + "'");
}

UserModel::UserModel(Method method, std::shared_ptr<const Vocabulary> vocab, ModelParams params)
    : method_(method), vocab_(std::move(vocab)), params_(std::move(params)) {
    if (!vocab_) throw InvalidArgument("model needs a vocabulary");
}

double UserModel::score(std::span<const StateIndex> window) const {
    switch (method_) {
        case Method::BinUnk: return score_binary_unknown(std::get<BinUnkModel>(params_), window);
        case Method::BinUnfore:
            return score_binary_unforeseen(std::get<BinUnforeModel>(params_), window);
        case Method::Med: return med_score(std::get<MedModel>(params_), window);
        case Method::MarkovChain:
            return mc_log_likelihood(std::get<MarkovChainModel>(params_), window);
        case Method::HmmLap: return forward_log_likelihood(std::get<HmmModel>(params_), window);
        case Method::MsHmm: return mshmm_log_likelihood(std::get<MsHmmModel>(params_), window);
    }
    throw InvalidArgument("bad method");
}

UserModel train_user_model(Method method, const ObservationSequence& train,
                           const ModelConfig& config) {
    validate(config.smoothing);
    auto vocab = std::make_shared<const Vocabulary>(build_vocabulary(train));
    const auto indices = to_indices(train, *vocab);
    switch (method) {
        case Method::BinUnk:
            return UserModel(method, vocab, BinUnkModel{vocab->unknown_base()});
        case Method::BinUnfore: {
            BinUnforeModel m;
            m.seen.assign(vocab->size(), false);
            for (StateIndex i : indices) m.seen[i] = true;
            m.seen[vocab->session_start_index()] = true;  // markers never count as unforeseen
            m.seen[vocab->day_change_index()] = true;
            return UserModel(method, vocab, std::move(m));
        }
        case Method::Med: return UserModel(method, vocab, train_med(train, *vocab));
        case Method::MarkovChain:
            return UserModel(method, vocab,
                             train_markov_chain(indices, vocab->size(), config.smoothing));
        case Method::HmmLap:
            return UserModel(method, vocab,
                             laplace_smooth_emissions(train_hmm(indices, vocab->size(), config.hmm),
                                                      config.smoothing));
        case Method::MsHmm:
            return UserModel(method, vocab,
                             build_mshmm(train_hmm(indices, vocab->size(), config.hmm), train,
                                         *vocab, config.smoothing));
    }
    throw InvalidArgument("bad method");
}

double score_window(const UserModel& model, std::span<const ObservationSymbol> window) {
    ObservationSequence seq;
    seq.symbols.assign(window.begin(), window.end());
    seq.timestamps.assign(window.size(), 0);
    const auto indices = to_indices(seq, model.vocabulary());
    return model.score(indices);
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

constexpr int kFormatVersion = 1;

json hmm_to_json(const HmmModel& m) {
    return {{"states", m.states},
            {"symbols", m.symbols},
            {"pi", m.pi},
            {"trans", m.trans},
            {"emit", m.emit},
            {"seed", m.info.seed},
            {"iterations", m.info.iterations},
            {"converged", m.info.converged},
            {"log_likelihoods", m.info.log_likelihoods}};
}

HmmModel hmm_from_json(const json& j) {
    HmmModel m;
    m.states = j.at("states").get<std::size_t>();
    m.symbols = j.at("symbols").get<std::size_t>();
    m.pi = j.at("pi").get<std::vector<double>>();
    m.trans = j.at("trans").get<std::vector<double>>();
    m.emit = j.at("emit").get<std::vector<double>>();
    m.info.seed = j.at("seed").get<std::uint64_t>();
    m.info.iterations = j.at("iterations").get<std::size_t>();
    m.info.converged = j.at("converged").get<bool>();
    m.info.log_likelihoods = j.at("log_likelihoods").get<std::vector<double>>();
    if (m.pi.size() != m.states || m.trans.size() != m.states * m.states ||
        m.emit.size() != m.states * m.symbols) {
        throw FormatError("model file: inconsistent HMM dimensions");
    }
    return m;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace

void save_model(std::ostream& out, const UserModel& model) {
    const auto& vocab = model.vocabulary();
    json j;
    j["format"] = "appauth-model";
    j["version"] = kFormatVersion;
    j["method"] = std::string(method_tag(model.method()));
    j["owner"] = vocab.owner();
    j["apps"] = vocab.apps();
    j["vocab_hash"] = hex64(vocab.hash());

    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            json params;
            if constexpr (std::is_same_v<T, BinUnkModel>) {
                params["unknown_begin"] = p.unknown_begin;
            } else if constexpr (std::is_same_v<T, BinUnforeModel>) {
                std::vector<StateIndex> seen;
                for (StateIndex i = 0; i < p.seen.size(); ++i) {
                    if (p.seen[i]) seen.push_back(i);
                }
                params["seen"] = seen;
            } else if constexpr (std::is_same_v<T, MedModel>) {
                params["train"] = p.train;
            } else if constexpr (std::is_same_v<T, MarkovChainModel>) {
                j["delta"] = p.delta;
                params["states"] = p.states;
                params["prior"] = p.prior;
                params["transition"] = p.transition;
            } else if constexpr (std::is_same_v<T, HmmModel>) {
                j["hidden_states"] = p.states;
                params["hmm"] = hmm_to_json(p);
            } else if constexpr (std::is_same_v<T, MsHmmModel>) {
                j["delta"] = p.delta;
                j["hidden_states"] = p.base.states;
                params["hmm"] = hmm_to_json(p.base);
                json tz = json::array();
                for (const auto& [key, v] : p.marginals.p_app_tz) {
                    tz.push_back({key.first, static_cast<int>(key.second), v});
                }
                json w = json::array();
                for (const auto& [key, v] : p.marginals.p_app_w) {
                    w.push_back({key.first, static_cast<int>(key.second), v});
                }
                params["p_app_tz"] = tz;
                params["p_app_w"] = w;
                std::vector<StateIndex> seen;
                for (StateIndex i = 0; i < p.seen.size(); ++i) {
                    if (p.seen[i]) seen.push_back(i);
                }
                params["seen"] = seen;
                params["fallback"] = p.fallback;
            }
            j["params"] = std::move(params);
        },
        model.params());
    out << j.dump() << '\n';
    if (!out) throw IoError("failed to write model");
}

UserModel load_model(std::istream& in) {
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw FormatError(std::string("model file: ") + e.what());
    }
    try {
        if (j.at("format") != "appauth-model" || j.at("version") != kFormatVersion) {
            throw FormatError("model file: unsupported format");
        }
        const Method method = parse_method(j.at("method").get<std::string>());
        auto vocab = std::make_shared<const Vocabulary>(
            j.at("owner").get<std::string>(), j.at("apps").get<std::vector<std::string>>());
        if (hex64(vocab->hash()) != j.at("vocab_hash").get<std::string>()) {
            throw FormatError("model file: vocabulary hash mismatch");
        }
        const json& p = j.at("params");
        auto seen_mask = [&](const json& arr) {
            std::vector<bool> seen(vocab->size(), false);
            for (StateIndex i : arr.get<std::vector<StateIndex>>()) {
                if (i >= seen.size()) throw FormatError("model file: seen index out of range");
                seen[i] = true;
            }
            return seen;
        };
        switch (method) {
            case Method::BinUnk:
                return UserModel(method, vocab, BinUnkModel{p.at("unknown_begin").get<StateIndex>()});
            case Method::BinUnfore:
                return UserModel(method, vocab, BinUnforeModel{seen_mask(p.at("seen"))});
            case Method::Med:
                return UserModel(method, vocab,
                                 MedModel{p.at("train").get<std::vector<StateIndex>>(),
                                          symbol_traits(*vocab)});
            case Method::MarkovChain: {
                MarkovChainModel m;
                m.delta = j.at("delta").get<double>();
                m.states = p.at("states").get<std::size_t>();
                m.prior = p.at("prior").get<std::vector<double>>();
                m.transition = p.at("transition").get<std::vector<double>>();
                if (m.states != vocab->size() || m.prior.size() != m.states ||
                    m.transition.size() != m.states * m.states) {
                    throw FormatError("model file: inconsistent Markov chain dimensions");
                }
                m.refresh_logs();
                return UserModel(method, vocab, std::move(m));
            }
            case Method::HmmLap: return UserModel(method, vocab, hmm_from_json(p.at("hmm")));
            case Method::MsHmm: {
                MsHmmModel m;
                m.base = hmm_from_json(p.at("hmm"));
                m.delta = j.at("delta").get<double>();
                for (const auto& row : p.at("p_app_tz")) {
                    m.marginals.p_app_tz[{row.at(0).get<std::string>(),
                                          static_cast<TimeZoneBin>(row.at(1).get<int>())}] =
                        row.at(2).get<double>();
                }
                for (const auto& row : p.at("p_app_w")) {
                    m.marginals.p_app_w[{row.at(0).get<std::string>(),
                                         static_cast<DayFlag>(row.at(1).get<int>())}] =
                        row.at(2).get<double>();
                }
                m.seen = seen_mask(p.at("seen"));
                m.fallback = p.at("fallback").get<std::vector<double>>();
                if (m.fallback.size() != vocab->size() || m.base.symbols != vocab->size()) {
                    throw FormatError("model file: inconsistent MSHMM dimensions");
                }
                return UserModel(method, vocab, std::move(m));
            }
        }
    } catch (const json::exception& e) {
        throw FormatError(std::string("model file: ") + e.what());
    }
    throw FormatError("model file: bad method");
}

}  // namespace appauth
