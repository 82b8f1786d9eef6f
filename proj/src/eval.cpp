#include "appauth/eval.hpp"

#include "appauth/error.hpp"
#include "appauth/log.hpp"
#include "appauth/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace appauth {

std::size_t window_count(std::size_t length, std::size_t n, std::size_t stride) {
    if (n == 0 || stride == 0) throw InvalidArgument("window length and stride must be positive");
    if (length < n) return 0;
    return (length - n) / stride + 1;
}

std::vector<ScoreRecord> generate_score_records(const std::vector<UserModel>& models,
                                                const std::vector<ObservationSequence>& tests,
                                                std::size_t n, std::size_t stride,
                                                std::size_t jobs) {
    if (n == 0 || stride == 0) throw InvalidArgument("window length and stride must be positive");
    std::vector<const ObservationSequence*> usable;
    for (const auto& t : tests) {
        if (t.size() < n) {
            log::warn("test sequence of " + t.owner + " has " + std::to_string(t.size()) +
                      " symbols, fewer than n=" + std::to_string(n) + "; skipped");
            continue;
        }
        usable.push_back(&t);
    }

    const std::size_t pairs = models.size() * usable.size();
    std::vector<std::vector<ScoreRecord>> per_pair(pairs);
    parallel_for(pairs, jobs, [&](std::size_t p) {
        const UserModel& model = models[p / usable.size()];
        const ObservationSequence& test = *usable[p % usable.size()];
        const auto indices = to_indices(test, model.vocabulary());
        auto& out = per_pair[p];
        out.reserve(window_count(indices.size(), n, stride));
        for (std::size_t end = n - 1; end < indices.size(); end += stride) {
            const std::span<const StateIndex> window(indices.data() + end + 1 - n, n);
            out.push_back({model.owner(), test.owner, end, model.score(window)});
        }
    });

    std::vector<ScoreRecord> records;
    for (auto& chunk : per_pair) {
        records.insert(records.end(), std::make_move_iterator(chunk.begin()),
                       std::make_move_iterator(chunk.end()));
    }
    std::stable_sort(records.begin(), records.end(), [](const ScoreRecord& a, const ScoreRecord& b) {
        if (a.model_owner != b.model_owner) return a.model_owner < b.model_owner;
        if (a.window_owner != b.window_owner) return a.window_owner < b.window_owner;
        return a.window_end_index < b.window_end_index;
    });
    return records;
}

ConfusionCounts confusion_counts(std::span<const ScoreRecord> records, double threshold) {
    ConfusionCounts cc;
    for (const auto& r : records) {
        const bool accept = r.score >= threshold;
        if (r.genuine()) {
            (accept ? cc.tp : cc.fn)++;
        } else {
            (accept ? cc.fp : cc.tn)++;
        }
    }
    return cc;
}

namespace {
double ratio(std::size_t num, std::size_t den, const char* name) {
    if (den == 0) throw UndefinedMetric(std::string(name) + " is undefined: zero denominator");
    return 100.0 * static_cast<double>(num) / static_cast<double>(den);
}
}  // namespace

double sensitivity(const ConfusionCounts& cc) { return ratio(cc.tp, cc.tp + cc.fn, "sensitivity"); }
double specificity(const ConfusionCounts& cc) { return ratio(cc.tn, cc.tn + cc.fp, "specificity"); }
double accuracy(const ConfusionCounts& cc) { return ratio(cc.tp + cc.tn, cc.total(), "accuracy"); }
double f1_score(const ConfusionCounts& cc) {
    return ratio(2 * cc.tp, 2 * cc.tp + cc.fp + cc.fn, "F1-score");
}

RocCurve roc_curve(std::span<const double> genuine, std::span<const double> impostor) {
    if (genuine.empty() || impostor.empty()) {
        throw InvalidArgument("ROC needs at least one genuine and one impostor score");
    }
    std::vector<double> g(genuine.begin(), genuine.end());
    std::vector<double> im(impostor.begin(), impostor.end());
    std::sort(g.begin(), g.end());
    std::sort(im.begin(), im.end());
    std::vector<double> thresholds;
    thresholds.reserve(g.size() + im.size());
    std::merge(g.begin(), g.end(), im.begin(), im.end(), std::back_inserter(thresholds));
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

    const double ng = static_cast<double>(g.size());
    const double ni = static_cast<double>(im.size());
    RocCurve curve;
    curve.points.reserve(thresholds.size() + 1);
    std::size_t g_below = 0;   // genuine scores < threshold
    std::size_t i_below = 0;   // impostor scores < threshold
    for (double t : thresholds) {
        while (g_below < g.size() && g[g_below] < t) ++g_below;
        while (i_below < im.size() && im[i_below] < t) ++i_below;
        curve.points.push_back({t, static_cast<double>(im.size() - i_below) / ni,
                                static_cast<double>(g_below) / ng});
    }
    curve.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 1.0});
    return curve;
}

RocCurve roc_curve(std::span<const ScoreRecord> records) {
    std::vector<double> genuine, impostor;
    for (const auto& r : records) (r.genuine() ? genuine : impostor).push_back(r.score);
    return roc_curve(genuine, impostor);
}

double equal_error_rate(const RocCurve& curve) {
    const auto& pts = curve.points;
    if (pts.empty()) throw InvalidArgument("empty ROC curve");
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const double d = pts[k].far - pts[k].frr;
        if (d > 0.0) continue;
        if (d == 0.0 || k == 0) return 100.0 * pts[k].far;
        const double d_prev = pts[k - 1].far - pts[k - 1].frr;
        const double w = d_prev / (d_prev - d);
        return 100.0 * (pts[k - 1].far + w * (pts[k].far - pts[k - 1].far));
    }
    return 100.0 * pts.back().far;
}

double equal_error_rate(std::span<const ScoreRecord> records) {
    return equal_error_rate(roc_curve(records));
}

double percentile(std::vector<double> values, double p) {
    if (values.empty()) throw InvalidArgument("percentile of an empty set");
    if (!(p >= 0.0 && p <= 100.0)) throw InvalidArgument("percentile must lie in [0, 100]");
    std::sort(values.begin(), values.end());
    const double pos = p / 100.0 * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::string format_number(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    return buf;
}

void write_scores_csv(std::ostream& out, std::span<const ScoreRecord> records) {
    out << "model_owner,window_owner,end_index,score\n";
    for (const auto& r : records) {
        out << r.model_owner << ',' << r.window_owner << ',' << r.window_end_index << ','
            << format_number(r.score) << '\n';
    }
}

void write_roc_csv(std::ostream& out, const RocCurve& curve) {
    out << "threshold,far,frr\n";
    for (const auto& p : curve.points) {
        out << format_number(p.threshold) << ',' << format_number(p.far) << ','
            << format_number(p.frr) << '\n';
    }
}

}  // namespace appauth
