#pragma once

// Uniform train/score interface over the six verification methods. Every
// score is oriented so that higher means more likely genuine.

#include "appauth/binary_rules.hpp"
#include "appauth/edit_distance.hpp"
#include "appauth/encode.hpp"
#include "appauth/hmm.hpp"
#include "appauth/markov_chain.hpp"
#include "appauth/mshmm.hpp"
#include "appauth/smoothing.hpp"

#include <iosfwd>
#include <memory>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace appauth {

enum class Method { BinUnk, BinUnfore, Med, MarkovChain, HmmLap, MsHmm };

inline constexpr Method kAllMethods[] = {Method::BinUnk, Method::BinUnfore, Method::Med,
                                         Method::MarkovChain, Method::HmmLap, Method::MsHmm};

/// "bin-unk", "bin-unfore", "med", "mc", "hmm-lap", "mshmm".
std::string_view method_tag(Method method);
Method parse_method(std::string_view tag);

struct ModelConfig {
    SmoothingConfig smoothing;
    HmmTrainingConfig hmm;
};

using ModelParams =
    std::variant<BinUnkModel, BinUnforeModel, MedModel, MarkovChainModel, HmmModel, MsHmmModel>;

class UserModel {
public:
    UserModel(Method method, std::shared_ptr<const Vocabulary> vocab, ModelParams params);

    Method method() const { return method_; }
    const Vocabulary& vocabulary() const { return *vocab_; }
    std::shared_ptr<const Vocabulary> vocabulary_ptr() const { return vocab_; }
    const std::string& owner() const { return vocab_->owner(); }
    const ModelParams& params() const { return params_; }

    /// Window given as state indices of this model's vocabulary.
    double score(std::span<const StateIndex> window) const;

private:
    Method method_;
    std::shared_ptr<const Vocabulary> vocab_;
    ModelParams params_;
};

UserModel train_user_model(Method method, const ObservationSequence& train,
                           const ModelConfig& config = {});

/// Projects the window onto the model's vocabulary and scores it.
double score_window(const UserModel& model, std::span<const ObservationSymbol> window);

/// JSON container: method tag, vocabulary and its hash, delta, K, parameter
/// arrays at full double precision and training metadata.
void save_model(std::ostream& out, const UserModel& model);
UserModel load_model(std::istream& in);

}  // namespace appauth
