#pragma once

// Verification protocol: windowed genuine/impostor scoring, confusion-matrix
// metrics, ROC curves and equal error rate.

#include "appauth/encode.hpp"
#include "appauth/user_model.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace appauth {

struct ScoreRecord {
    std::string model_owner;
    std::string window_owner;
    std::size_t window_end_index = 0;
    double score = 0.0;

    bool genuine() const { return model_owner == window_owner; }
};

/// Number of windows of length n with end indices n-1, n-1+stride, ...
std::size_t window_count(std::size_t length, std::size_t n, std::size_t stride = 1);

/// Scores every window of every test sequence against every model. Test
/// sequences are given unprojected; each is projected onto the verifying
/// model's vocabulary. Owners with fewer than n symbols are skipped with a
/// warning. Output is sorted by (model_owner, window_owner, end index).
std::vector<ScoreRecord> generate_score_records(const std::vector<UserModel>& models,
                                                const std::vector<ObservationSequence>& tests,
                                                std::size_t n, std::size_t stride = 1,
                                                std::size_t jobs = 1);

struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t total() const { return tp + fp + tn + fn; }
    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// Accept iff score >= threshold.
ConfusionCounts confusion_counts(std::span<const ScoreRecord> records, double threshold);

// Percentages. Each throws UndefinedMetric when its denominator is zero.
double sensitivity(const ConfusionCounts& cc);
double specificity(const ConfusionCounts& cc);
double accuracy(const ConfusionCounts& cc);
double f1_score(const ConfusionCounts& cc);

struct RocPoint {
    double threshold = 0.0;
    double far = 0.0;  // fraction of impostor scores >= threshold
    double frr = 0.0;  // fraction of genuine scores < threshold
};

struct RocCurve {
    std::vector<RocPoint> points;  // ascending threshold; last point at +inf
};

RocCurve roc_curve(std::span<const double> genuine, std::span<const double> impostor);
RocCurve roc_curve(std::span<const ScoreRecord> records);

/// EER in percent, linearly interpolated at the FAR/FRR crossing.
double equal_error_rate(const RocCurve& curve);
double equal_error_rate(std::span<const ScoreRecord> records);

/// Linear-interpolation percentile (p in [0, 100]) of unsorted values.
double percentile(std::vector<double> values, double p);

/// Formats a number with 6 significant digits.
std::string format_number(double value);

void write_scores_csv(std::ostream& out, std::span<const ScoreRecord> records);
void write_roc_csv(std::ostream& out, const RocCurve& curve);

}  // namespace appauth
