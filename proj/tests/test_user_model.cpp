#include "appauth/error.hpp"
#include "appauth/user_model.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

namespace appauth {
namespace {

using Sym = ObservationSymbol;

ObservationSequence random_user(const std::string& owner, std::uint32_t seed, std::size_t len,
                                int app_range) {
    std::mt19937 rng(seed);
    ObservationSequence seq{owner, {}, {}};
    seq.push(Sym::session_start(), 0);
    for (std::size_t i = 1; i < len; ++i) {
        const auto r = rng() % 20;
        if (r == 0) {
            seq.push(Sym::session_start(), 0);
        } else if (r == 1) {
            seq.push(Sym::day_change(), 0);
        } else {
            seq.push(Sym::make_app("app" + std::to_string(rng() % app_range),
                                   static_cast<TimeZoneBin>(rng() % 3), static_cast<DayFlag>(rng() % 2)),
                     0);
        }
    }
    return seq;
}

ModelConfig small_config() {
    ModelConfig cfg;
    cfg.hmm.hidden_states = 3;
    cfg.hmm.max_iter = 5;
    return cfg;
}

TEST(MethodTag, RoundTrip) {
    for (Method m : kAllMethods) EXPECT_EQ(parse_method(method_tag(m)), m);
    EXPECT_THROW(parse_method("svm"), InvalidArgument);
}

TEST(UserModel, EveryMethodScoresFiniteValues) {
    const auto train = random_user("alice", 1, 150, 5);
    const auto probe = random_user("bob", 2, 40, 8);
    for (Method m : kAllMethods) {
        const auto model = train_user_model(m, train, small_config());
        EXPECT_EQ(model.method(), m);
        EXPECT_EQ(model.owner(), "alice");
        const auto idx = to_indices(probe, model.vocabulary());
        for (std::size_t end = 9; end < idx.size(); ++end) {
            const double s = model.score(std::span(idx).subspan(end - 9, 10));
            EXPECT_TRUE(std::isfinite(s)) << method_tag(m);
        }
    }
}

TEST(UserModel, SaveLoadGivesIdenticalScores) {
    const auto train = random_user("alice", 3, 150, 5);
    const auto probe = random_user("bob", 4, 60, 8);
    for (Method m : kAllMethods) {
        const auto model = train_user_model(m, train, small_config());
        std::stringstream buf;
        save_model(buf, model);
        const auto loaded = load_model(buf);
        EXPECT_EQ(loaded.method(), m);
        EXPECT_EQ(loaded.vocabulary().hash(), model.vocabulary().hash());
        const auto idx = to_indices(probe, model.vocabulary());
        for (std::size_t end = 19; end < idx.size(); ++end) {
            const auto w = std::span(idx).subspan(end - 19, 20);
            EXPECT_EQ(loaded.score(w), model.score(w)) << method_tag(m);
        }
    }
}

TEST(UserModel, LoadRejectsTamperedFiles) {
    const auto model = train_user_model(Method::MarkovChain, random_user("a", 5, 50, 3), small_config());
    std::stringstream buf;
    save_model(buf, model);
    std::string text = buf.str();

    std::istringstream garbage("not json");
    EXPECT_THROW(load_model(garbage), FormatError);

    std::string renamed = text;
    const auto pos = renamed.find("\"app0\"");
    ASSERT_NE(pos, std::string::npos);
    renamed.replace(pos, 6, "\"zzz0\"");
    std::istringstream bad_hash(renamed);
    EXPECT_THROW(load_model(bad_hash), FormatError);
}

TEST(UserModel, ScoreWindowProjectsForeignApps) {
    const auto model = train_user_model(Method::BinUnk, random_user("a", 6, 80, 3), small_config());
    const std::vector<Sym> w{Sym::make_app("never-seen", TimeZoneBin::TZ1, DayFlag::Weekday)};
    EXPECT_EQ(score_window(model, w), 0.0);
}

}  // namespace
}  // namespace appauth
