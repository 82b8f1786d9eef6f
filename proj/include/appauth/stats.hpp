#pragma once

// Cohort statistics: app/observation overlap matrices, unknown-app rates in
// test data, and top-app usage tables.

#include "appauth/encode.hpp"
#include "appauth/error.hpp"

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace appauth {

using Matrix = std::vector<std::vector<double>>;

/// Entry (i, j) = 100 * |S_i ∩ S_j| / |S_i|. Row-normalized, so asymmetric.
template <typename Set>
Matrix similarity_matrix(const std::vector<Set>& sets) {
    if (sets.size() < 2) throw InvalidArgument("similarity matrix needs at least two users");
    for (const auto& s : sets) {
        if (s.empty()) throw InvalidArgument("similarity matrix: empty set");
    }
    Matrix m(sets.size(), std::vector<double>(sets.size(), 0.0));
    for (std::size_t i = 0; i < sets.size(); ++i) {
        for (std::size_t j = 0; j < sets.size(); ++j) {
            std::size_t common = 0;
            for (const auto& x : sets[i]) common += sets[j].count(x);
            m[i][j] = 100.0 * static_cast<double>(common) / static_cast<double>(sets[i].size());
        }
    }
    return m;
}

Matrix app_similarity_matrix(const std::vector<Vocabulary>& vocabs);
Matrix observation_similarity_matrix(const std::vector<SymbolSet>& train_symbols);

struct BoxSummary {
    double min = 0, q1 = 0, median = 0, q3 = 0, max = 0, mean = 0;
    std::size_t count = 0;
};

BoxSummary box_summary(const std::vector<double>& values);

struct UnknownAppEntry {
    std::string model_owner;
    std::string test_owner;
    double percent = 0.0;
    bool genuine() const { return model_owner == test_owner; }
};

struct UnknownAppStats {
    std::vector<UnknownAppEntry> entries;
    BoxSummary genuine;
    BoxSummary impostor;
};

/// Percentage of each test user's app samples whose app is outside each
/// verifier's vocabulary. Test sequences without app symbols are skipped.
UnknownAppStats unknown_app_stats(const std::vector<Vocabulary>& vocabs,
                                  const std::vector<ObservationSequence>& tests);

struct TopAppRow {
    std::size_t rank = 0;
    std::string app;
    std::size_t user_count = 0;
    double per_user_usage = 0.0;  // total samples / users of the app
    double overall_usage = 0.0;   // total samples / cohort size
};

/// `samples_per_user` maps every cohort member to their app samples (a user
/// with no samples still counts toward the cohort size). Ranked by overall
/// usage, ties broken by app id.
std::vector<TopAppRow> top_apps_report(
    const std::map<std::string, std::vector<std::string>>& samples_per_user, std::size_t k = 20);

void write_matrix_csv(std::ostream& out, const std::vector<std::string>& labels, const Matrix& m);
void write_unknown_stats_csv(std::ostream& out, const UnknownAppStats& stats);
/// Boxplot data (min, quartiles, max, mean) per population.
void write_unknown_summary_csv(std::ostream& out, const UnknownAppStats& stats);
void write_top_apps_csv(std::ostream& out, const std::vector<TopAppRow>& rows);

}  // namespace appauth
