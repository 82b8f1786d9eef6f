#pragma once

// End-to-end cohort preparation and the EER grid experiment.

#include "appauth/encode.hpp"
#include "appauth/eval.hpp"
#include "appauth/ingest.hpp"
#include "appauth/user_model.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace appauth {

struct PipelineOptions {
    Timestamp period = 30;
    double train_fraction = 0.7;
    Timestamp idle_gap = kDefaultIdleGap;
    std::size_t min_train = kDefaultMinTrain;
    std::size_t min_test = kDefaultMinTest;
};

struct UserData {
    std::string user;
    ObservationSequence train;
    ObservationSequence test;
    SplitCounts counts;  // app samples
};

struct PreparedCohort {
    Timestamp period = 0;
    std::vector<UserData> users;                // eligible users, sorted by id
    std::map<std::string, SplitCounts> counts;  // every user with samples

    std::vector<ObservationSequence> test_sequences() const;
};

/// Sessionize, sample, split and encode every user; keep the eligible ones.
PreparedCohort prepare_cohort(const std::vector<RawEvent>& events, const PipelineOptions& options);

/// Per-user models. Each user's HMM seed is derived from the base seed and
/// the user id, so results do not depend on cohort order or job count.
std::vector<UserModel> train_models(const PreparedCohort& cohort, Method method,
                                    const ModelConfig& config, std::size_t jobs = 1);

ModelConfig config_for_user(const ModelConfig& base, const std::string& user);

struct EerGrid {
    Method method = Method::MsHmm;
    std::vector<std::size_t> n_values;
    std::vector<Timestamp> periods;
    std::vector<std::vector<double>> eer;  // [n][period], percent
};

struct GridOptions {
    std::vector<std::size_t> n_values{20, 30, 40, 50, 60};
    std::vector<Timestamp> periods{5, 10, 15, 20, 25, 30};
    std::size_t stride = 1;
    std::size_t jobs = 1;
};

EerGrid evaluate_method(Method method, const std::vector<RawEvent>& events,
                        const GridOptions& grid, PipelineOptions options,
                        const ModelConfig& config);

/// Same experiment on an already-prepared cohort (a single period column).
std::vector<double> evaluate_n_values(const std::vector<UserModel>& models,
                                      const PreparedCohort& cohort,
                                      const std::vector<std::size_t>& n_values,
                                      std::size_t stride = 1, std::size_t jobs = 1);

void write_eer_grid_csv(std::ostream& out, const EerGrid& grid);

}  // namespace appauth
