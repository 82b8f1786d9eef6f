#include "appauth/edit_distance.hpp"
#include "appauth/error.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

namespace appauth {
namespace {

using Sym = ObservationSymbol;
constexpr auto TZ1 = TimeZoneBin::TZ1;
constexpr auto TZ2 = TimeZoneBin::TZ2;
constexpr auto TZ3 = TimeZoneBin::TZ3;
constexpr auto WD = DayFlag::Weekday;
constexpr auto WE = DayFlag::Weekend;

TEST(SubstitutionCost, Table) {
    const auto a11 = Sym::make_app("a", TZ1, WD);
    EXPECT_EQ(substitution_cost(a11, a11), 0);
    EXPECT_EQ(substitution_cost(a11, Sym::make_app("a", TZ2, WD)), 1);
    EXPECT_EQ(substitution_cost(a11, Sym::make_app("a", TZ1, WE)), 1);
    EXPECT_EQ(substitution_cost(a11, Sym::make_app("a", TZ3, WE)), 2);
    EXPECT_EQ(substitution_cost(a11, Sym::make_app("b", TZ1, WD)), 3);
    EXPECT_EQ(substitution_cost(a11, Sym::make_unknown(TZ1, WD)), 3);
    EXPECT_EQ(substitution_cost(Sym::make_unknown(TZ1, WD), Sym::make_unknown(TZ2, WD)), 1);
    EXPECT_EQ(substitution_cost(Sym::session_start(), Sym::session_start()), 0);
    EXPECT_EQ(substitution_cost(Sym::session_start(), Sym::day_change()), 3);
    EXPECT_EQ(substitution_cost(Sym::day_change(), a11), 3);
}

std::vector<Sym> every_symbol(const Vocabulary& vocab) {
    std::vector<Sym> out;
    for (StateIndex i = 0; i < vocab.size(); ++i) out.push_back(vocab.symbol_at(i));
    return out;
}

TEST(SubstitutionCost, SymmetricAndTriangular) {
    const Vocabulary vocab("u", {"a", "b", "c"});
    const auto all = every_symbol(vocab);
    for (const auto& u : all) {
        EXPECT_EQ(substitution_cost(u, u), 0);
        for (const auto& v : all) {
            EXPECT_EQ(substitution_cost(u, v), substitution_cost(v, u));
            for (const auto& w : all) {
                EXPECT_LE(substitution_cost(u, w), substitution_cost(u, v) + substitution_cost(v, w));
            }
        }
    }
}

TEST(SubstitutionCost, TraitsMatchSymbols) {
    const Vocabulary vocab("u", {"a", "b", "c"});
    const auto traits = symbol_traits(vocab);
    for (StateIndex i = 0; i < vocab.size(); ++i) {
        for (StateIndex j = 0; j < vocab.size(); ++j) {
            EXPECT_EQ(substitution_cost(traits[i], traits[j]),
                      substitution_cost(vocab.symbol_at(i), vocab.symbol_at(j)));
        }
    }
}

TEST(MedDistance, TimeZoneMismatchCostsOne) {
    const std::vector<Sym> train{Sym::make_app("x1", TZ1, WD), Sym::make_app("x2", TZ1, WD),
                                 Sym::make_app("x3", TZ1, WD), Sym::make_app("x4", TZ1, WD)};
    const std::vector<Sym> window{Sym::make_app("x2", TZ2, WD)};
    EXPECT_EQ(med_distance(train, window), 1);
}

TEST(MedDistance, UnknownsAgainstAppsCostThreeEach) {
    const std::vector<Sym> train{Sym::make_app("a", TZ1, WD), Sym::make_app("b", TZ1, WD)};
    const std::vector<Sym> window{Sym::make_unknown(TZ1, WD), Sym::make_unknown(TZ1, WD)};
    EXPECT_EQ(med_distance(train, window), 6);
}

TEST(MedDistance, ExactSubstringIsFree) {
    const std::vector<Sym> train{Sym::session_start(), Sym::make_app("a", TZ1, WD),
                                 Sym::make_app("b", TZ1, WD), Sym::day_change()};
    const std::vector<Sym> window(train.begin() + 1, train.begin() + 3);
    EXPECT_EQ(med_distance(train, window), 0);
}

TEST(MedDistance, WindowLengthLimits) {
    const std::vector<Sym> train{Sym::make_app("a", TZ1, WD), Sym::make_app("b", TZ1, WD)};
    EXPECT_EQ(med_distance(train, train), 0);
    const std::vector<Sym> longer{Sym::make_app("a", TZ1, WD), Sym::make_app("b", TZ1, WD),
                                  Sym::make_app("a", TZ1, WD)};
    EXPECT_THROW(med_distance(train, longer), InvalidArgument);
    EXPECT_THROW(med_distance(train, std::span<const Sym>()), InvalidArgument);
}

std::vector<Sym> random_symbols(std::mt19937& rng, std::size_t len) {
    std::vector<Sym> out;
    for (std::size_t i = 0; i < len; ++i) {
        const auto tz = static_cast<TimeZoneBin>(rng() % 3);
        const auto day = static_cast<DayFlag>(rng() % 2);
        switch (rng() % 7) {
            case 0: out.push_back(Sym::session_start()); break;
            case 1: out.push_back(Sym::day_change()); break;
            case 2: out.push_back(Sym::make_unknown(tz, day)); break;
            default: out.push_back(Sym::make_app(std::string(1, static_cast<char>('a' + rng() % 3)), tz, day));
        }
    }
    return out;
}

TEST(MedDistance, MatchesExhaustiveOracle) {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 150; ++trial) {
        const auto train = random_symbols(rng, 1 + rng() % 7);
        const auto window = random_symbols(rng, 1 + rng() % train.size());
        EXPECT_EQ(med_distance(train, window), oracle::exhaustive_substring_distance(train, window));
    }
}

TEST(MedDistance, IndexModelMatchesSymbolVersion) {
    std::mt19937 rng(5);
    const Vocabulary vocab("u", {"a", "b", "c"});
    for (int trial = 0; trial < 50; ++trial) {
        ObservationSequence train{"u", {}, {}};
        for (auto& s : random_symbols(rng, 12)) train.push(s, 0);
        const auto model = train_med(train, vocab);
        ObservationSequence test{"v", {}, {}};
        for (auto& s : random_symbols(rng, 1 + rng() % 6)) test.push(s, 0);
        const auto projected = project_to_vocabulary(test, vocab);
        const auto idx = to_indices(test, vocab);
        const auto projected_train = project_to_vocabulary(train, vocab);
        EXPECT_EQ(med_distance(model, idx), med_distance(projected_train.symbols, projected.symbols));
        EXPECT_EQ(med_score(model, idx), -static_cast<double>(med_distance(model, idx)));
    }
}

}  // namespace
}  // namespace appauth
