#include "appauth/encode.hpp"

#include "appauth/error.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>

namespace appauth {
namespace {

constexpr Timestamp kTz1End = 8 * 3600;
constexpr Timestamp kTz2End = 16 * 3600;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

const char* tz_name(TimeZoneBin tz) {
    switch (tz) {
        case TimeZoneBin::TZ1: return "TZ1";
        case TimeZoneBin::TZ2: return "TZ2";
        case TimeZoneBin::TZ3: return "TZ3";
    }
    return "?";
}

const char* day_name(DayFlag day) { return day == DayFlag::Weekday ? "WD" : "WE"; }

TimeZoneBin parse_tz(std::string_view s) {
    if (s == "TZ1") return TimeZoneBin::TZ1;
    if (s == "TZ2") return TimeZoneBin::TZ2;
    if (s == "TZ3") return TimeZoneBin::TZ3;
    throw FormatError("bad time zone '" + std::string(s) + "'");
}

DayFlag parse_day(std::string_view s) {
    if (s == "WD") return DayFlag::Weekday;
    if (s == "WE") return DayFlag::Weekend;
    throw FormatError("bad day flag '" + std::string(s) + "'");
}

StateIndex offset_of(TimeZoneBin tz, DayFlag day) {
    return static_cast<StateIndex>(tz) * kDayFlagCount + static_cast<StateIndex>(day);
}

}  // namespace

TimeZoneBin timezone_of(Timestamp s) {
    if (s < 0 || s >= kSecondsPerDay) {
        throw InvalidArgument("time of day out of range: " + std::to_string(s));
    }
    if (s == 0) return TimeZoneBin::TZ3;
    if (s <= kTz1End) return TimeZoneBin::TZ1;
    if (s <= kTz2End) return TimeZoneBin::TZ2;
    return TimeZoneBin::TZ3;
}

DayFlag day_flag_of(std::chrono::year_month_day date) {
    const std::chrono::weekday wd{std::chrono::sys_days{date}};
    return (wd == std::chrono::Saturday || wd == std::chrono::Sunday) ? DayFlag::Weekend
                                                                      : DayFlag::Weekday;
}

std::chrono::year_month_day local_date(Timestamp local) {
    const auto days = floor_div(local, kSecondsPerDay);
    return std::chrono::year_month_day{std::chrono::sys_days{std::chrono::days{days}}};
}

TimeZoneBin timezone_at(Timestamp local) {
    return timezone_of(local - floor_div(local, kSecondsPerDay) * kSecondsPerDay);
}

DayFlag day_flag_at(Timestamp local) { return day_flag_of(local_date(local)); }

ObservationSymbol ObservationSymbol::make_app(std::string app, TimeZoneBin tz, DayFlag day) {
    return {SymbolKind::App, std::move(app), tz, day};
}
ObservationSymbol ObservationSymbol::make_unknown(TimeZoneBin tz, DayFlag day) {
    return {SymbolKind::Unknown, {}, tz, day};
}
ObservationSymbol ObservationSymbol::session_start() { return {SymbolKind::SessionStart, {}, {}, {}}; }
ObservationSymbol ObservationSymbol::day_change() { return {SymbolKind::DayChange, {}, {}, {}}; }

std::string to_string(const ObservationSymbol& symbol) {
    switch (symbol.kind) {
        case SymbolKind::App:
            return "app:" + symbol.app + ':' + tz_name(symbol.tz) + ':' + day_name(symbol.day);
        case SymbolKind::Unknown:
            return std::string("unk:") + tz_name(symbol.tz) + ':' + day_name(symbol.day);
        case SymbolKind::SessionStart: return "psi";
        case SymbolKind::DayChange: return "delta";
    }
    return "?";
}

ObservationSymbol parse_symbol(std::string_view text) {
    if (text == "psi") return ObservationSymbol::session_start();
    if (text == "delta") return ObservationSymbol::day_change();
    // Split off the trailing TZ and day fields; app ids may themselves contain ':'.
    const auto last = text.rfind(':');
    if (last == std::string_view::npos) throw FormatError("bad symbol '" + std::string(text) + "'");
    const auto mid = text.rfind(':', last - 1);
    if (mid == std::string_view::npos || mid == 0) {
        throw FormatError("bad symbol '" + std::string(text) + "'");
    }
    const auto day = parse_day(text.substr(last + 1));
    const auto tz = parse_tz(text.substr(mid + 1, last - mid - 1));
    const auto head = text.substr(0, mid);
    if (head == "unk") return ObservationSymbol::make_unknown(tz, day);
    if (head.starts_with("app:") && head.size() > 4) {
        return ObservationSymbol::make_app(std::string(head.substr(4)), tz, day);
    }
    throw FormatError("bad symbol '" + std::string(text) + "'");
}

void ObservationSequence::push(ObservationSymbol symbol, Timestamp t) {
    symbols.push_back(std::move(symbol));
    timestamps.push_back(t);
}

ObservationSequence encode_sequence(std::string owner, const std::vector<Session>& sessions) {
    ObservationSequence seq;
    seq.owner = std::move(owner);
    std::optional<std::chrono::year_month_day> last_date;
    for (const auto& session : sessions) {
        if (session.samples.empty()) continue;
        bool first = true;
        for (const auto& sample : session.samples) {
            const auto date = local_date(sample.timestamp);
            if (last_date && *last_date != date) {
                seq.push(ObservationSymbol::day_change(), sample.timestamp);
            }
            if (first) {
                seq.push(ObservationSymbol::session_start(), sample.timestamp);
                first = false;
            }
            seq.push(ObservationSymbol::make_app(sample.app_id, timezone_at(sample.timestamp),
                                                 day_flag_of(date)),
                     sample.timestamp);
            last_date = date;
        }
    }
    return seq;
}

Vocabulary::Vocabulary(std::string owner, std::vector<std::string> apps)
    : owner_(std::move(owner)), apps_(std::move(apps)) {
    std::sort(apps_.begin(), apps_.end());
    apps_.erase(std::unique(apps_.begin(), apps_.end()), apps_.end());
}

std::optional<std::size_t> Vocabulary::app_position(std::string_view app) const {
    const auto it = std::lower_bound(apps_.begin(), apps_.end(), app,
                                     [](const std::string& a, std::string_view b) { return a < b; });
    if (it == apps_.end() || *it != app) return std::nullopt;
    return static_cast<std::size_t>(it - apps_.begin());
}

bool Vocabulary::contains_app(std::string_view app) const { return app_position(app).has_value(); }

StateIndex Vocabulary::index_of(const ObservationSymbol& symbol) const {
    switch (symbol.kind) {
        case SymbolKind::App: {
            const auto pos = app_position(symbol.app);
            if (!pos) {
                throw InvalidArgument("app '" + symbol.app + "' is not in the vocabulary of " +
                                      owner_);
            }
            return static_cast<StateIndex>(6 * *pos) + offset_of(symbol.tz, symbol.day);
        }
        case SymbolKind::Unknown: return unknown_base() + offset_of(symbol.tz, symbol.day);
        case SymbolKind::SessionStart: return session_start_index();
        case SymbolKind::DayChange: return day_change_index();
    }
    throw InvalidArgument("bad symbol kind");
}

ObservationSymbol Vocabulary::symbol_at(StateIndex index) const {
    if (index >= size()) throw InvalidArgument("state index out of range");
    if (index == session_start_index()) return ObservationSymbol::session_start();
    if (index == day_change_index()) return ObservationSymbol::day_change();
    const auto tz = static_cast<TimeZoneBin>((index % 6) / kDayFlagCount);
    const auto day = static_cast<DayFlag>(index % kDayFlagCount);
    if (index >= unknown_base()) return ObservationSymbol::make_unknown(tz, day);
    return ObservationSymbol::make_app(apps_[index / 6], tz, day);
}

std::uint64_t Vocabulary::hash() const {
    std::uint64_t h = 14695981039346656037ull;
    auto mix = [&h](std::string_view s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
        h ^= 0xff;  // separator
        h *= 1099511628211ull;
    };
    mix(owner_);
    for (const auto& a : apps_) mix(a);
    return h;
}

Vocabulary build_vocabulary(const ObservationSequence& train) {
    std::vector<std::string> apps;
    for (const auto& s : train.symbols) {
        if (s.kind == SymbolKind::App) apps.push_back(s.app);
    }
    if (apps.empty()) {
        throw InvalidArgument("cannot build a vocabulary for " + train.owner +
                              ": training sequence has no app symbols");
    }
    return Vocabulary(train.owner, std::move(apps));
}

ObservationSequence project_to_vocabulary(const ObservationSequence& seq, const Vocabulary& vocab) {
    ObservationSequence out = seq;
    for (auto& s : out.symbols) {
        if (s.kind == SymbolKind::App && !vocab.contains_app(s.app)) {
            s = ObservationSymbol::make_unknown(s.tz, s.day);
        }
    }
    return out;
}

std::vector<StateIndex> to_indices(const ObservationSequence& seq, const Vocabulary& vocab) {
    std::vector<StateIndex> out;
    out.reserve(seq.size());
    for (const auto& s : seq.symbols) {
        if (s.kind == SymbolKind::App && !vocab.contains_app(s.app)) {
            out.push_back(vocab.index_of(ObservationSymbol::make_unknown(s.tz, s.day)));
        } else {
            out.push_back(vocab.index_of(s));
        }
    }
    return out;
}

std::span<const ObservationSymbol> last_n_window(const ObservationSequence& seq, std::size_t n,
                                                 std::size_t end_index) {
    if (n == 0) throw InvalidArgument("window length must be positive");
    if (end_index >= seq.size()) throw InvalidArgument("window end beyond sequence");
    if (end_index + 1 < n) throw InvalidArgument("insufficient history for window");
    return std::span<const ObservationSymbol>(seq.symbols).subspan(end_index + 1 - n, n);
}

SymbolSet symbol_set(const ObservationSequence& seq) {
    return SymbolSet(seq.symbols.begin(), seq.symbols.end());
}

bool is_unforeseen(const ObservationSymbol& symbol, const SymbolSet& train_symbols) {
    if (!symbol.carries_app()) return false;
    if (symbol.kind == SymbolKind::Unknown) return true;
    return !train_symbols.contains(symbol);
}

void write_sequence_csv(std::ostream& out, const ObservationSequence& seq, bool header) {
    if (header) out << "owner,timestamp,symbol\n";
    for (std::size_t i = 0; i < seq.size(); ++i) {
        out << seq.owner << ',' << seq.timestamps[i] << ',' << to_string(seq.symbols[i]) << '\n';
    }
}

std::vector<ObservationSequence> read_sequence_csv(std::istream& in) {
    std::vector<ObservationSequence> out;
    std::string line;
    if (!std::getline(in, line)) return out;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "owner,timestamp,symbol") throw FormatError("sequence csv: bad header '" + line + "'");
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
        if (c2 == std::string::npos) {
            throw FormatError("sequence csv line " + std::to_string(line_no) + ": expected 3 fields");
        }
        std::string owner = line.substr(0, c1);
        Timestamp t = 0;
        const char* b = line.data() + c1 + 1;
        const char* e = line.data() + c2;
        auto [p, ec] = std::from_chars(b, e, t);
        if (ec != std::errc{} || p != e) {
            throw FormatError("sequence csv line " + std::to_string(line_no) + ": bad timestamp");
        }
        if (out.empty() || out.back().owner != owner) {
            out.push_back({});
            out.back().owner = owner;
        }
        out.back().push(parse_symbol(std::string_view(line).substr(c2 + 1)), t);
    }
    return out;
}

}  // namespace appauth
