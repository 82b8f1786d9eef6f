#pragma once

// Observation alphabet: (app, time zone, day flag) triples plus the unknown
// pseudo-app U, the session-start marker and the day-change marker.

#include "appauth/ingest.hpp"

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace appauth {

enum class TimeZoneBin : std::uint8_t { TZ1 = 0, TZ2 = 1, TZ3 = 2 };
enum class DayFlag : std::uint8_t { Weekday = 0, Weekend = 1 };

inline constexpr int kTimeZoneCount = 3;
inline constexpr int kDayFlagCount = 2;
inline constexpr Timestamp kSecondsPerDay = 86400;

/// Clock-of-day bin. Boundaries are half-open (low, high]: TZ1 = (0, 8h],
/// TZ2 = (8h, 16h], TZ3 = (16h, 24h) plus midnight itself.
TimeZoneBin timezone_of(Timestamp seconds_of_day);

DayFlag day_flag_of(std::chrono::year_month_day date);

std::chrono::year_month_day local_date(Timestamp local);
TimeZoneBin timezone_at(Timestamp local);
DayFlag day_flag_at(Timestamp local);

enum class SymbolKind : std::uint8_t { App, Unknown, SessionStart, DayChange };

struct ObservationSymbol {
    SymbolKind kind = SymbolKind::SessionStart;
    std::string app;  // App only
    TimeZoneBin tz = TimeZoneBin::TZ1;  // App and Unknown only
    DayFlag day = DayFlag::Weekday;     // App and Unknown only

    static ObservationSymbol make_app(std::string app, TimeZoneBin tz, DayFlag day);
    static ObservationSymbol make_unknown(TimeZoneBin tz, DayFlag day);
    static ObservationSymbol session_start();
    static ObservationSymbol day_change();

    bool carries_app() const { return kind == SymbolKind::App || kind == SymbolKind::Unknown; }

    friend bool operator==(const ObservationSymbol&, const ObservationSymbol&) = default;
    friend auto operator<=>(const ObservationSymbol&, const ObservationSymbol&) = default;
};

/// `app:<id>:<TZ>:<WD|WE>`, `unk:<TZ>:<WD|WE>`, `psi` or `delta`.
std::string to_string(const ObservationSymbol& symbol);
ObservationSymbol parse_symbol(std::string_view text);

struct ObservationSequence {
    std::string owner;
    std::vector<ObservationSymbol> symbols;
    std::vector<Timestamp> timestamps;

    std::size_t size() const { return symbols.size(); }
    void push(ObservationSymbol symbol, Timestamp t);
};

/// Encodes time-sorted sampled sessions. Each session opens with a
/// session-start marker; a day-change marker precedes any app symbol whose
/// local date differs from the previous app symbol (before the session-start
/// marker when the change coincides with a new session).
ObservationSequence encode_sequence(std::string owner, const std::vector<Session>& sessions);

using StateIndex = std::uint32_t;

/// Enumerated state space of one reference user: 6 states per known app,
/// 6 for U, then session start and day change.
class Vocabulary {
public:
    Vocabulary(std::string owner, std::vector<std::string> apps);

    const std::string& owner() const { return owner_; }
    const std::vector<std::string>& apps() const { return apps_; }
    std::size_t app_count() const { return apps_.size(); }
    std::size_t size() const { return 6 * apps_.size() + 8; }

    bool contains_app(std::string_view app) const;
    std::optional<std::size_t> app_position(std::string_view app) const;

    /// Throws InvalidArgument for App symbols outside the vocabulary.
    StateIndex index_of(const ObservationSymbol& symbol) const;
    ObservationSymbol symbol_at(StateIndex index) const;

    StateIndex unknown_base() const { return static_cast<StateIndex>(6 * apps_.size()); }
    StateIndex session_start_index() const { return unknown_base() + 6; }
    StateIndex day_change_index() const { return unknown_base() + 7; }

    /// Stable 64-bit FNV-1a hash over owner and app list.
    std::uint64_t hash() const;

    friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
        return a.owner_ == b.owner_ && a.apps_ == b.apps_;
    }

private:
    std::string owner_;
    std::vector<std::string> apps_;  // sorted, unique
};

Vocabulary build_vocabulary(const ObservationSequence& train);

/// Replaces app symbols whose app is outside the vocabulary by U.
ObservationSequence project_to_vocabulary(const ObservationSequence& seq, const Vocabulary& vocab);

/// Projects and maps every symbol to its state index.
std::vector<StateIndex> to_indices(const ObservationSequence& seq, const Vocabulary& vocab);

/// Symbols [end_index - n + 1, end_index].
std::span<const ObservationSymbol> last_n_window(const ObservationSequence& seq, std::size_t n,
                                                 std::size_t end_index);

using SymbolSet = std::set<ObservationSymbol>;

SymbolSet symbol_set(const ObservationSequence& seq);

bool is_unforeseen(const ObservationSymbol& symbol, const SymbolSet& train_symbols);

// Sequence CSV: owner,timestamp,symbol
void write_sequence_csv(std::ostream& out, const ObservationSequence& seq, bool header = true);
std::vector<ObservationSequence> read_sequence_csv(std::istream& in);

}  // namespace appauth
