#include "appauth/error.hpp"
#include "appauth/mshmm.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace appauth {
namespace {

using Sym = ObservationSymbol;
constexpr auto TZ1 = TimeZoneBin::TZ1;
constexpr auto TZ2 = TimeZoneBin::TZ2;
constexpr auto TZ3 = TimeZoneBin::TZ3;
constexpr auto WD = DayFlag::Weekday;
constexpr auto WE = DayFlag::Weekend;

const double kDelta = std::exp(-20.0);

ObservationSequence training() {
    ObservationSequence seq{"u1", {}, {}};
    const std::vector<Sym> body{Sym::session_start(),       Sym::make_app("a", TZ1, WD),
                                Sym::make_app("b", TZ1, WD), Sym::make_app("a", TZ2, WD),
                                Sym::day_change(),          Sym::session_start(),
                                Sym::make_app("a", TZ1, WE), Sym::make_app("b", TZ2, WE)};
    for (int rep = 0; rep < 5; ++rep) {
        for (const auto& s : body) seq.push(s, 0);
    }
    return seq;
}

struct Fixture {
    ObservationSequence train = training();
    Vocabulary vocab = build_vocabulary(train);
    MsHmmModel model = build_mshmm(
        train_hmm(to_indices(train, vocab), vocab.size(), {.hidden_states = 3, .max_iter = 10, .seed = 2}),
        train, vocab);
};

TEST(Marginals, Frequencies) {
    const auto m = compute_marginals(training());
    // per repetition: a:TZ1 x2, b:TZ1, a:TZ2, b:TZ2 ; WD: a x2, b ; WE: a, b
    EXPECT_DOUBLE_EQ(m.app_tz("a", TZ1), 0.4);
    EXPECT_DOUBLE_EQ(m.app_tz("a", TZ2), 0.2);
    EXPECT_DOUBLE_EQ(m.app_tz("a", TZ3), 0.0);
    EXPECT_DOUBLE_EQ(m.app_w("a", WD), 0.4);
    EXPECT_DOUBLE_EQ(m.app_w("b", WE), 0.2);
}

TEST(MsHmm, EmissionCases) {
    const Fixture f;
    const auto& v = f.vocab;
    const auto seen = v.index_of(Sym::make_app("a", TZ1, WD));
    const auto unseen_known_app = v.index_of(Sym::make_app("a", TZ2, WE));
    const auto unseen_no_tz_mass = v.index_of(Sym::make_app("b", TZ3, WD));
    const auto unknown = v.index_of(Sym::make_unknown(TZ1, WD));
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_DOUBLE_EQ(mshmm_emission(f.model, k, seen), std::max(f.model.base.b(k, seen), kDelta * kDelta));
        EXPECT_DOUBLE_EQ(mshmm_emission(f.model, k, unseen_known_app), 0.2 * 0.2);
        EXPECT_DOUBLE_EQ(mshmm_emission(f.model, k, unseen_no_tz_mass), kDelta * 0.2);
        EXPECT_DOUBLE_EQ(mshmm_emission(f.model, k, unknown), kDelta * kDelta);
    }
    EXPECT_THROW(mshmm_emission(f.model, 3, seen), InvalidArgument);
}

TEST(MsHmm, AppendingUnknownCostsExactlyTwoLogDelta) {
    const Fixture f;
    auto idx = to_indices(f.train, f.vocab);
    std::vector<StateIndex> window(idx.begin() + 3, idx.begin() + 12);
    const double before = mshmm_log_likelihood(f.model, window);
    window.push_back(f.vocab.index_of(Sym::make_unknown(TZ3, WE)));
    const double after = mshmm_log_likelihood(f.model, window);
    EXPECT_NEAR(after - before, -40.0, 1e-9);
}

TEST(MsHmm, UnseenContextBeatsUnknownApp) {
    const Fixture f;
    const auto idx = to_indices(f.train, f.vocab);
    std::vector<StateIndex> a(idx.begin(), idx.begin() + 6);
    std::vector<StateIndex> b = a;
    a.push_back(f.vocab.index_of(Sym::make_app("a", TZ3, WE)));
    b.push_back(f.vocab.index_of(Sym::make_unknown(TZ3, WE)));
    EXPECT_GT(mshmm_log_likelihood(f.model, a), mshmm_log_likelihood(f.model, b));
}

TEST(MsHmm, TotalOverEveryWindowOfTheVocabulary) {
    const Fixture f;
    for (StateIndex i = 0; i < f.vocab.size(); ++i) {
        for (StateIndex j = 0; j < f.vocab.size(); ++j) {
            EXPECT_TRUE(std::isfinite(mshmm_log_likelihood(f.model, std::vector<StateIndex>{i, j})));
        }
    }
}

TEST(MsHmm, RejectsMismatchedBase) {
    const Fixture f;
    auto base = f.model.base;
    base.symbols += 1;
    EXPECT_THROW(build_mshmm(base, f.train, f.vocab), InvalidArgument);
}

}  // namespace
}  // namespace appauth
