#pragma once

#include "appauth/error.hpp"
#include "appauth/ingest.hpp"
#include "appauth/pipeline.hpp"
#include "appauth/simulate.hpp"
#include "appauth/user_model.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace appauth {

/// Bad configuration or command-line values (as opposed to bad data).
class ConfigError : public Error {
public:
    using Error::Error;
};

struct ExperimentConfig {
    std::string events;                  // event log path; empty means use `synthetic`
    std::optional<CohortSpec> synthetic;  // seed comes from `seed`
    std::vector<Timestamp> periods{5, 10, 15, 20, 25, 30};
    std::vector<std::size_t> n_values{20, 30, 40, 50, 60};
    double train_fraction = 0.7;
    std::vector<Method> methods{std::begin(kAllMethods), std::end(kAllMethods)};
    double delta = SmoothingConfig{}.delta;
    std::size_t hidden_states = 20;
    std::size_t max_iter = 50;
    double convergence_tol = 1e-6;
    std::uint64_t seed = 1;
    std::size_t stride = 1;
    Timestamp idle_gap = kDefaultIdleGap;
    std::size_t min_train = kDefaultMinTrain;
    std::size_t min_test = kDefaultMinTest;
    std::size_t intrusion_segment = kIntrusionSegment;
    double genuine_percentile = 5.0;
    std::optional<double> threshold;  // fixed intrusion threshold
    std::string out = "out";
    std::size_t jobs = 1;  // not part of the experiment identity

    PipelineOptions pipeline(Timestamp period) const;
    ModelConfig model() const;
    CohortSpec cohort() const;  // synthetic spec with the run seed applied
};

/// Throws ConfigError on unknown keys, wrong types or out-of-range values.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& config);
void validate(const ExperimentConfig& config);

/// FNV-1a over the canonical JSON dump (jobs and out excluded).
std::string config_hash(const ExperimentConfig& config);

/// Writes `<dir>/manifest.json` describing the run.
void write_manifest(const std::filesystem::path& dir, const std::string& command,
                    const ExperimentConfig& config, const nlohmann::json& inputs = nlohmann::json::object());

std::string library_version();

}  // namespace appauth
