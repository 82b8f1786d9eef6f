#include "appauth/error.hpp"
#include "appauth/eval.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

namespace appauth {
namespace {

std::vector<ScoreRecord> records(const std::vector<double>& genuine, const std::vector<double>& impostor) {
    std::vector<ScoreRecord> out;
    for (double s : genuine) out.push_back({"u", "u", out.size(), s});
    for (double s : impostor) out.push_back({"u", "v", out.size(), s});
    return out;
}

TEST(WindowCount, Formula) {
    EXPECT_EQ(window_count(10, 3), 8u);
    EXPECT_EQ(window_count(10, 10), 1u);
    EXPECT_EQ(window_count(9, 10), 0u);
    EXPECT_EQ(window_count(10, 3, 2), 4u);
}

TEST(Confusion, AcceptAtOrAboveThreshold) {
    const auto r = records({1.0, 0.5, 0.2}, {0.9, 0.1});
    const auto cc = confusion_counts(r, 0.5);
    EXPECT_EQ(cc, (ConfusionCounts{.tp = 2, .fp = 1, .tn = 1, .fn = 1}));
}

TEST(Metrics, AllOnesIsFiftyPercent) {
    const ConfusionCounts cc{1, 1, 1, 1};
    EXPECT_EQ(sensitivity(cc), 50.0);
    EXPECT_EQ(specificity(cc), 50.0);
    EXPECT_EQ(accuracy(cc), 50.0);
    EXPECT_EQ(f1_score(cc), 50.0);
}

TEST(Metrics, Identities) {
    std::mt19937 rng(1);
    for (int trial = 0; trial < 200; ++trial) {
        const ConfusionCounts cc{1 + rng() % 50, 1 + rng() % 50, 1 + rng() % 50, 1 + rng() % 50};
        const double tp = cc.tp, fp = cc.fp, tn = cc.tn, fn = cc.fn;
        EXPECT_NEAR(sensitivity(cc), 100 * tp / (tp + fn), 1e-12);
        EXPECT_NEAR(specificity(cc), 100 * tn / (tn + fp), 1e-12);
        EXPECT_NEAR(accuracy(cc), 100 * (tp + tn) / (tp + fp + tn + fn), 1e-12);
        EXPECT_NEAR(f1_score(cc), 100 * 2 * tp / (2 * tp + fp + fn), 1e-12);
        const double precision = tp / (tp + fp), recall = tp / (tp + fn);
        EXPECT_NEAR(f1_score(cc), 100 * 2 * precision * recall / (precision + recall), 1e-9);
    }
}

TEST(Metrics, UndefinedDenominators) {
    EXPECT_THROW(sensitivity({0, 3, 3, 0}), UndefinedMetric);
    EXPECT_THROW(specificity({3, 0, 0, 3}), UndefinedMetric);
    EXPECT_THROW(accuracy({}), UndefinedMetric);
    EXPECT_THROW(f1_score({0, 0, 5, 0}), UndefinedMetric);
}

TEST(Eer, InterleavedScoresGiveFifty) {
    EXPECT_DOUBLE_EQ(equal_error_rate(records({1, 3}, {0, 2})), 50.0);
}

TEST(Eer, SeparatedScoresGiveZero) {
    EXPECT_DOUBLE_EQ(equal_error_rate(records({5, 6, 7}, {1, 2, 3})), 0.0);
}

TEST(Eer, ReversedScoresGiveHundred) {
    EXPECT_DOUBLE_EQ(equal_error_rate(records({1, 2}, {5, 6})), 100.0);
}

TEST(Eer, IdenticalDistributionsGiveFifty) {
    std::mt19937 rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> s(1 + rng() % 30);
        for (auto& x : s) x = static_cast<double>(rng() % 10);
        EXPECT_NEAR(equal_error_rate(records(s, s)), 50.0, 1e-9);
    }
}

TEST(Roc, MonotoneAndBounded) {
    std::mt19937 rng(12);
    std::normal_distribution<double> n(0, 1);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<double> g(20), i(25);
        for (auto& x : g) x = std::round(n(rng) * 4 + 2);
        for (auto& x : i) x = std::round(n(rng) * 4);
        const auto curve = roc_curve(g, i);
        ASSERT_FALSE(curve.points.empty());
        EXPECT_TRUE(std::isinf(curve.points.back().threshold));
        EXPECT_EQ(curve.points.back().far, 0.0);
        EXPECT_EQ(curve.points.back().frr, 1.0);
        for (std::size_t k = 1; k < curve.points.size(); ++k) {
            EXPECT_LT(curve.points[k - 1].threshold, curve.points[k].threshold);
            EXPECT_LE(curve.points[k].far, curve.points[k - 1].far);
            EXPECT_GE(curve.points[k].frr, curve.points[k - 1].frr);
        }
        const double eer = equal_error_rate(curve);
        EXPECT_GE(eer, 0.0);
        EXPECT_LE(eer, 100.0);
    }
}

TEST(Roc, NeedsBothClasses) {
    EXPECT_THROW(roc_curve(records({1, 2}, {})), InvalidArgument);
    EXPECT_THROW(roc_curve(records({}, {1})), InvalidArgument);
}

TEST(Percentile, LinearInterpolation) {
    EXPECT_DOUBLE_EQ(percentile({4, 1, 3, 2}, 0), 1.0);
    EXPECT_DOUBLE_EQ(percentile({4, 1, 3, 2}, 100), 4.0);
    EXPECT_DOUBLE_EQ(percentile({4, 1, 3, 2}, 50), 2.5);
    EXPECT_THROW(percentile({}, 5), InvalidArgument);
}

TEST(ScoreRecords, GenuineAndImpostorWindows) {
    ObservationSequence a{"a", {}, {}}, b{"b", {}, {}};
    using Sym = ObservationSymbol;
    for (int i = 0; i < 30; ++i) {
        a.push(Sym::make_app("x" + std::to_string(i % 3), TimeZoneBin::TZ1, DayFlag::Weekday), i);
        b.push(Sym::make_app("y" + std::to_string(i % 4), TimeZoneBin::TZ2, DayFlag::Weekday), i);
    }
    std::vector<UserModel> models{train_user_model(Method::BinUnk, a, {}),
                                  train_user_model(Method::BinUnk, b, {})};
    ObservationSequence short_seq{"c", {}, {}};
    short_seq.push(Sym::session_start(), 0);
    const auto recs = generate_score_records(models, {a, b, short_seq}, 5, 1, 2);
    EXPECT_EQ(recs.size(), 2u * 2u * 26u);
    for (const auto& r : recs) EXPECT_EQ(r.score, r.genuine() ? 1.0 : 0.0);
    EXPECT_DOUBLE_EQ(equal_error_rate(recs), 0.0);
    const auto serial = generate_score_records(models, {a, b}, 5, 1, 1);
    ASSERT_EQ(serial.size(), recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) {
        EXPECT_EQ(serial[i].model_owner, recs[i].model_owner);
        EXPECT_EQ(serial[i].window_end_index, recs[i].window_end_index);
    }
}

TEST(Csv, NumbersUseSixSignificantDigits) {
    EXPECT_EQ(format_number(3.14159265), "3.14159");
    EXPECT_EQ(format_number(-40.0), "-40");
    std::ostringstream out;
    write_scores_csv(out, records({0.5}, {}));
    EXPECT_EQ(out.str(), "model_owner,window_owner,end_index,score\nu,u,0,0.5\n");
}

}  // namespace
}  // namespace appauth
