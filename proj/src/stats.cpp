#include "appauth/stats.hpp"

#include "appauth/eval.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

namespace appauth {

Matrix app_similarity_matrix(const std::vector<Vocabulary>& vocabs) {
    std::vector<std::set<std::string>> sets;
    sets.reserve(vocabs.size());
    for (const auto& v : vocabs) sets.emplace_back(v.apps().begin(), v.apps().end());
    return similarity_matrix(sets);
}

Matrix observation_similarity_matrix(const std::vector<SymbolSet>& train_symbols) {
    return similarity_matrix(train_symbols);
}

BoxSummary box_summary(const std::vector<double>& values) {
    BoxSummary b;
    b.count = values.size();
    if (values.empty()) return b;
    b.min = *std::min_element(values.begin(), values.end());
    b.max = *std::max_element(values.begin(), values.end());
    b.q1 = percentile(values, 25.0);
    b.median = percentile(values, 50.0);
    b.q3 = percentile(values, 75.0);
    b.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    return b;
}

UnknownAppStats unknown_app_stats(const std::vector<Vocabulary>& vocabs,
                                  const std::vector<ObservationSequence>& tests) {
    UnknownAppStats stats;
    std::vector<double> genuine, impostor;
    for (const auto& vocab : vocabs) {
        for (const auto& test : tests) {
            std::size_t apps = 0, unknown = 0;
            for (const auto& s : test.symbols) {
                if (s.kind == SymbolKind::Unknown) {
                    ++apps;
                    ++unknown;
                } else if (s.kind == SymbolKind::App) {
                    ++apps;
                    if (!vocab.contains_app(s.app)) ++unknown;
                }
            }
            if (apps == 0) continue;
            UnknownAppEntry e{vocab.owner(), test.owner,
                              100.0 * static_cast<double>(unknown) / static_cast<double>(apps)};
            (e.genuine() ? genuine : impostor).push_back(e.percent);
            stats.entries.push_back(std::move(e));
        }
    }
    stats.genuine = box_summary(genuine);
    stats.impostor = box_summary(impostor);
    return stats;
}

std::vector<TopAppRow> top_apps_report(
    const std::map<std::string, std::vector<std::string>>& samples_per_user, std::size_t k) {
    std::map<std::string, std::pair<std::size_t, std::size_t>> per_app;  // (total, users)
    for (const auto& [user, samples] : samples_per_user) {
        std::map<std::string, std::size_t> counts;
        for (const auto& app : samples) ++counts[app];
        for (const auto& [app, c] : counts) {
            per_app[app].first += c;
            per_app[app].second += 1;
        }
    }
    const double cohort = static_cast<double>(samples_per_user.size());
    std::vector<TopAppRow> rows;
    for (const auto& [app, tu] : per_app) {
        TopAppRow r;
        r.app = app;
        r.user_count = tu.second;
        r.per_user_usage = static_cast<double>(tu.first) / static_cast<double>(tu.second);
        r.overall_usage = static_cast<double>(tu.first) / cohort;
        rows.push_back(std::move(r));
    }
    std::sort(rows.begin(), rows.end(), [](const TopAppRow& a, const TopAppRow& b) {
        if (a.overall_usage != b.overall_usage) return a.overall_usage > b.overall_usage;
        return a.app < b.app;
    });
    if (rows.size() > k) rows.resize(k);
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i].rank = i + 1;
    return rows;
}

void write_matrix_csv(std::ostream& out, const std::vector<std::string>& labels, const Matrix& m) {
    out << "user";
    for (const auto& l : labels) out << ',' << l;
    out << '\n';
    for (std::size_t i = 0; i < m.size(); ++i) {
        out << labels[i];
        for (double v : m[i]) out << ',' << format_number(v);
        out << '\n';
    }
}

void write_unknown_stats_csv(std::ostream& out, const UnknownAppStats& stats) {
    out << "model_owner,test_owner,genuine,unknown_percent\n";
    for (const auto& e : stats.entries) {
        out << e.model_owner << ',' << e.test_owner << ',' << (e.genuine() ? 1 : 0) << ','
            << format_number(e.percent) << '\n';
    }
}

void write_unknown_summary_csv(std::ostream& out, const UnknownAppStats& stats) {
    out << "population,count,min,q1,median,q3,max,mean\n";
    auto row = [&](const char* name, const BoxSummary& b) {
        out << name << ',' << b.count << ',' << format_number(b.min) << ','
            << format_number(b.q1) << ',' << format_number(b.median) << ','
            << format_number(b.q3) << ',' << format_number(b.max) << ','
            << format_number(b.mean) << '\n';
    };
    row("genuine", stats.genuine);
    row("impostor", stats.impostor);
}

void write_top_apps_csv(std::ostream& out, const std::vector<TopAppRow>& rows) {
    out << "rank,app,user_count,per_user_usage,overall_usage\n";
    for (const auto& r : rows) {
        out << r.rank << ',' << r.app << ',' << r.user_count << ','
            << format_number(r.per_user_usage) << ',' << format_number(r.overall_usage) << '\n';
    }
}

}  // namespace appauth
