#include "appauth/encode.hpp"
#include "appauth/error.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>

namespace appauth {
namespace {

constexpr Timestamp kMonday = 1609718400;  // 2021-01-04 00:00
constexpr Timestamp kHour = 3600;

using Sym = ObservationSymbol;
constexpr auto TZ1 = TimeZoneBin::TZ1;
constexpr auto TZ2 = TimeZoneBin::TZ2;
constexpr auto TZ3 = TimeZoneBin::TZ3;
constexpr auto WD = DayFlag::Weekday;
constexpr auto WE = DayFlag::Weekend;

TEST(TimeZone, Boundaries) {
    EXPECT_EQ(timezone_of(0), TZ3);
    EXPECT_EQ(timezone_of(1), TZ1);
    EXPECT_EQ(timezone_of(8 * kHour), TZ1);
    EXPECT_EQ(timezone_of(8 * kHour + 1), TZ2);
    EXPECT_EQ(timezone_of(16 * kHour), TZ2);
    EXPECT_EQ(timezone_of(16 * kHour + 1), TZ3);
    EXPECT_EQ(timezone_of(86399), TZ3);
}

TEST(TimeZone, OutOfRangeThrows) {
    EXPECT_THROW(timezone_of(-1), InvalidArgument);
    EXPECT_THROW(timezone_of(86400), InvalidArgument);
}

TEST(TimeZone, PartitionCoversEverySecondOnce) {
    std::array<int, 3> counts{};
    for (Timestamp s = 0; s < kSecondsPerDay; ++s) ++counts[static_cast<int>(timezone_of(s))];
    EXPECT_EQ(counts[0], 28800);
    EXPECT_EQ(counts[1], 28800);
    EXPECT_EQ(counts[2], 28800);
}

TEST(DayFlag, Weekends) {
    using namespace std::chrono;
    EXPECT_EQ(day_flag_of(2021y / January / 9), WE);
    EXPECT_EQ(day_flag_of(2021y / January / 10), WE);
    EXPECT_EQ(day_flag_of(2021y / January / 11), WD);
    EXPECT_EQ(day_flag_at(kMonday), WD);
    EXPECT_EQ(day_flag_at(kMonday + 5 * kSecondsPerDay), WE);
}

TEST(Symbol, StringRoundTrip) {
    const std::vector<Sym> symbols{Sym::make_app("com.a", TZ2, WE), Sym::make_app("x:y", TZ1, WD),
                                   Sym::make_unknown(TZ3, WD), Sym::session_start(),
                                   Sym::day_change()};
    for (const auto& s : symbols) EXPECT_EQ(parse_symbol(to_string(s)), s);
    EXPECT_EQ(to_string(symbols[0]), "app:com.a:TZ2:WE");
    EXPECT_THROW(parse_symbol("app:a:TZ4:WD"), FormatError);
    EXPECT_THROW(parse_symbol("nonsense"), FormatError);
}

Session session(Timestamp start, Timestamp end, std::vector<Sample> samples) {
    return {"u1", start, end, std::move(samples)};
}

TEST(EncodeSequence, ConsecutiveDays) {
    const Timestamp d1 = kMonday + 10 * kHour;
    const Timestamp d2 = d1 + kSecondsPerDay;
    const auto seq = encode_sequence("u1", {session(d1, d1, {{d1, "a"}}), session(d2, d2, {{d2, "a"}})});
    const std::vector<Sym> want{Sym::session_start(), Sym::make_app("a", TZ2, WD), Sym::day_change(),
                                Sym::session_start(), Sym::make_app("a", TZ2, WD)};
    EXPECT_EQ(seq.symbols, want);
    EXPECT_EQ(seq.timestamps.size(), seq.symbols.size());
}

TEST(EncodeSequence, SameDaySessionsHaveNoDayChange) {
    const Timestamp t = kMonday + 2 * kHour;
    const auto seq = encode_sequence("u1", {session(t, t + 40, {{t, "a"}, {t + 30, "b"}}),
                                            session(t + 5000, t + 5000, {{t + 5000, "c"}})});
    ASSERT_EQ(seq.size(), 5u);
    EXPECT_EQ(seq.symbols[0], Sym::session_start());
    EXPECT_EQ(seq.symbols[3], Sym::session_start());
}

TEST(EncodeSequence, MultiDayGapGivesOneDayChange) {
    const Timestamp t = kMonday + 12 * kHour;
    const auto seq = encode_sequence("u1", {session(t, t, {{t, "a"}}),
                                            session(t + 4 * kSecondsPerDay, t + 4 * kSecondsPerDay,
                                                    {{t + 4 * kSecondsPerDay, "a"}})});
    std::size_t deltas = 0;
    for (const auto& s : seq.symbols) deltas += s.kind == SymbolKind::DayChange;
    EXPECT_EQ(deltas, 1u);
}

TEST(EncodeSequence, DayChangeInsideSessionHasNoPsi) {
    const Timestamp t = kMonday + kSecondsPerDay - 30;
    const auto seq = encode_sequence("u1", {session(t, t + 30, {{t, "a"}, {t + 30, "a"}})});
    const std::vector<Sym> want{Sym::session_start(), Sym::make_app("a", TZ3, WD), Sym::day_change(),
                                Sym::make_app("a", TZ3, WD)};
    EXPECT_EQ(seq.symbols, want);
}

Vocabulary abc_vocab() { return Vocabulary("u1", {"c", "a", "b", "a"}); }

TEST(Vocabulary, LayoutAndSize) {
    const auto v = abc_vocab();
    EXPECT_EQ(v.app_count(), 3u);
    EXPECT_EQ(v.size(), 26u);
    EXPECT_EQ(v.index_of(Sym::make_app("a", TZ1, WD)), 0u);
    EXPECT_EQ(v.index_of(Sym::make_app("b", TZ2, WE)), 6u + 3u);
    EXPECT_EQ(v.index_of(Sym::make_unknown(TZ3, WE)), 18u + 5u);
    EXPECT_EQ(v.index_of(Sym::session_start()), 24u);
    EXPECT_EQ(v.index_of(Sym::day_change()), 25u);
    EXPECT_THROW(v.index_of(Sym::make_app("zzz", TZ1, WD)), InvalidArgument);
}

TEST(Vocabulary, IndexRoundTrip) {
    const auto v = abc_vocab();
    for (StateIndex i = 0; i < v.size(); ++i) EXPECT_EQ(v.index_of(v.symbol_at(i)), i);
}

TEST(Vocabulary, SizeLaw) {
    for (std::size_t n = 1; n < 40; ++n) {
        std::vector<std::string> apps;
        for (std::size_t i = 0; i < n; ++i) apps.push_back("app" + std::to_string(i));
        EXPECT_EQ(Vocabulary("u", apps).size(), 6 * n + 8);
    }
}

TEST(Vocabulary, BuildRequiresAnApp) {
    ObservationSequence seq{"u1", {}, {}};
    seq.push(Sym::session_start(), 0);
    EXPECT_THROW(build_vocabulary(seq), InvalidArgument);
}

ObservationSequence random_sequence(std::mt19937& rng, std::size_t len) {
    ObservationSequence seq{"u", {}, {}};
    for (std::size_t i = 0; i < len; ++i) {
        const auto tz = static_cast<TimeZoneBin>(rng() % 3);
        const auto day = static_cast<DayFlag>(rng() % 2);
        switch (rng() % 6) {
            case 0: seq.push(Sym::session_start(), 0); break;
            case 1: seq.push(Sym::day_change(), 0); break;
            case 2: seq.push(Sym::make_unknown(tz, day), 0); break;
            default: seq.push(Sym::make_app("a" + std::to_string(rng() % 6), tz, day), 0);
        }
    }
    return seq;
}

TEST(Projection, IdempotentAndOnlyTouchesForeignApps) {
    std::mt19937 rng(3);
    const Vocabulary vocab("u", {"a0", "a1", "a2"});
    for (int trial = 0; trial < 100; ++trial) {
        const auto seq = random_sequence(rng, 30);
        const auto once = project_to_vocabulary(seq, vocab);
        EXPECT_EQ(project_to_vocabulary(once, vocab).symbols, once.symbols);
        ASSERT_EQ(once.size(), seq.size());
        for (std::size_t i = 0; i < seq.size(); ++i) {
            const auto& s = seq.symbols[i];
            if (s.kind == SymbolKind::App && !vocab.contains_app(s.app)) {
                EXPECT_EQ(once.symbols[i], Sym::make_unknown(s.tz, s.day));
            } else {
                EXPECT_EQ(once.symbols[i], s);
            }
            EXPECT_LT(vocab.index_of(once.symbols[i]), vocab.size());
        }
    }
}

TEST(Windowing, LastN) {
    ObservationSequence seq{"u", {}, {}};
    for (int i = 0; i < 5; ++i) seq.push(Sym::make_app("a" + std::to_string(i), TZ1, WD), i);
    const auto w = last_n_window(seq, 3, 4);
    ASSERT_EQ(w.size(), 3u);
    EXPECT_EQ(w[0].app, "a2");
    EXPECT_EQ(w[2].app, "a4");
    EXPECT_EQ(last_n_window(seq, 2, 1)[0].app, "a0");
    EXPECT_THROW(last_n_window(seq, 3, 1), InvalidArgument);
    EXPECT_THROW(last_n_window(seq, 0, 4), InvalidArgument);
    EXPECT_THROW(last_n_window(seq, 1, 5), InvalidArgument);
}

TEST(Unforeseen, Definition) {
    ObservationSequence train{"u", {}, {}};
    train.push(Sym::session_start(), 0);
    train.push(Sym::make_app("a", TZ1, WD), 0);
    const auto set = symbol_set(train);
    EXPECT_FALSE(is_unforeseen(Sym::make_app("a", TZ1, WD), set));
    EXPECT_TRUE(is_unforeseen(Sym::make_app("a", TZ2, WD), set));
    EXPECT_TRUE(is_unforeseen(Sym::make_unknown(TZ1, WD), set));
    EXPECT_FALSE(is_unforeseen(Sym::session_start(), set));
    EXPECT_FALSE(is_unforeseen(Sym::day_change(), set));
}

TEST(SequenceCsv, RoundTrip) {
    std::mt19937 rng(11);
    auto a = random_sequence(rng, 20);
    a.owner = "alice";
    for (std::size_t i = 0; i < a.size(); ++i) a.timestamps[i] = static_cast<Timestamp>(100 + i);
    auto b = random_sequence(rng, 5);
    b.owner = "bob";
    std::ostringstream out;
    write_sequence_csv(out, a);
    write_sequence_csv(out, b, false);
    std::istringstream in(out.str());
    const auto back = read_sequence_csv(in);
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[0].owner, "alice");
    EXPECT_EQ(back[0].symbols, a.symbols);
    EXPECT_EQ(back[0].timestamps, a.timestamps);
    EXPECT_EQ(back[1].symbols, b.symbols);
}

}  // namespace
}  // namespace appauth
