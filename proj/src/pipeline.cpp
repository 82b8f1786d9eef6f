#include "appauth/pipeline.hpp"

#include "appauth/log.hpp"
#include "appauth/parallel.hpp"
#include "appauth/random.hpp"

#include <ostream>

namespace appauth {

std::vector<ObservationSequence> PreparedCohort::test_sequences() const {
    std::vector<ObservationSequence> out;
    out.reserve(users.size());
    for (const auto& u : users) out.push_back(u.test);
    return out;
}

PreparedCohort prepare_cohort(const std::vector<RawEvent>& events, const PipelineOptions& options) {
    PreparedCohort cohort;
    cohort.period = options.period;
    auto sessions = sessionize(events, options.idle_gap).sessions;
    auto per_user = group_by_user(sample_foreground(sessions, options.period));
    for (auto& [user, user_sessions] : per_user) {
        std::size_t total = 0;
        for (const auto& s : user_sessions) total += s.samples.size();
        if (total < 2) {
            cohort.counts[user] = {total, 0};
            continue;
        }
        auto split = chronological_split(user_sessions, options.train_fraction);
        const SplitCounts counts{split.train_samples(), split.test_samples()};
        cohort.counts[user] = counts;
        if (counts.train < options.min_train || counts.test < options.min_test ||
            counts.train == 0) {
            continue;
        }
        UserData data;
        data.user = user;
        data.counts = counts;
        data.train = encode_sequence(user, split.train);
        data.test = encode_sequence(user, split.test);
        cohort.users.push_back(std::move(data));
    }
    log::info("period " + std::to_string(options.period) + " s: " +
              std::to_string(cohort.users.size()) + " of " + std::to_string(cohort.counts.size()) +
              " users eligible");
    return cohort;
}

ModelConfig config_for_user(const ModelConfig& base, const std::string& user) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : user) {
        h ^= c;
        h *= 1099511628211ull;
    }
    ModelConfig cfg = base;
    cfg.hmm.seed = derive_seed(base.hmm.seed, h);
    return cfg;
}

std::vector<UserModel> train_models(const PreparedCohort& cohort, Method method,
                                    const ModelConfig& config, std::size_t jobs) {
    std::vector<std::optional<UserModel>> slots(cohort.users.size());
    parallel_for(cohort.users.size(), jobs, [&](std::size_t i) {
        const auto& u = cohort.users[i];
        slots[i].emplace(train_user_model(method, u.train, config_for_user(config, u.user)));
    });
    std::vector<UserModel> models;
    models.reserve(slots.size());
    for (auto& s : slots) models.push_back(std::move(*s));
    return models;
}

std::vector<double> evaluate_n_values(const std::vector<UserModel>& models,
                                      const PreparedCohort& cohort,
                                      const std::vector<std::size_t>& n_values,
                                      std::size_t stride, std::size_t jobs) {
    const auto tests = cohort.test_sequences();
    std::vector<double> eers;
    for (std::size_t n : n_values) {
        const auto records = generate_score_records(models, tests, n, stride, jobs);
        eers.push_back(equal_error_rate(records));
    }
    return eers;
}

EerGrid evaluate_method(Method method, const std::vector<RawEvent>& events,
                        const GridOptions& grid, PipelineOptions options,
                        const ModelConfig& config) {
    EerGrid out;
    out.method = method;
    out.n_values = grid.n_values;
    out.periods = grid.periods;
    out.eer.assign(grid.n_values.size(), std::vector<double>(grid.periods.size(), 0.0));
    for (std::size_t p = 0; p < grid.periods.size(); ++p) {
        options.period = grid.periods[p];
        const auto cohort = prepare_cohort(events, options);
        const auto models = train_models(cohort, method, config, grid.jobs);
        const auto column = evaluate_n_values(models, cohort, grid.n_values, grid.stride, grid.jobs);
        for (std::size_t i = 0; i < column.size(); ++i) out.eer[i][p] = column[i];
    }
    return out;
}

void write_eer_grid_csv(std::ostream& out, const EerGrid& grid) {
    out << "n";
    for (Timestamp p : grid.periods) out << ",period_" << p;
    out << '\n';
    for (std::size_t i = 0; i < grid.n_values.size(); ++i) {
        out << grid.n_values[i];
        for (double v : grid.eer[i]) out << ',' << format_number(v);
        out << '\n';
    }
}

}  // namespace appauth
