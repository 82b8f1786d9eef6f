#include "appauth/ingest.hpp"

#include "appauth/error.hpp"
#include "appauth/log.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>

namespace appauth {
namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (true) {
        const auto comma = line.find(',', pos);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(pos));
            return fields;
        }
        fields.push_back(line.substr(pos, comma - pos));
        pos = comma + 1;
    }
}

std::string_view strip_cr(std::string_view s) {
    if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
    return s;
}

const char* kind_name(EventKind kind) {
    switch (kind) {
        case EventKind::ForegroundApp: return "app";
        case EventKind::ScreenUnlock: return "unlock";
        case EventKind::ScreenLock: return "lock";
    }
    return "?";
}

}  // namespace

ParsedLog parse_event_log(std::istream& in) {
    ParsedLog result;
    std::string line;
    if (!std::getline(in, line)) {
        if (in.bad()) throw IoError("event log: read failure");
        throw FormatError("event log: missing header");
    }
    std::string_view header = strip_cr(line);
    if (header.starts_with("\xEF\xBB\xBF")) header.remove_prefix(3);
    if (header != kEventLogHeader) {
        throw FormatError("event log: expected header '" + std::string(kEventLogHeader) +
                          "', got '" + std::string(header) + "'");
    }

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view row = strip_cr(line);
        if (row.empty()) continue;
        auto reject = [&](std::string message) {
            result.errors.push_back({line_no, std::move(message)});
        };

        const auto fields = split_commas(row);
        if (fields.size() != 4) {
            reject("expected 4 fields, got " + std::to_string(fields.size()));
            continue;
        }
        RawEvent ev;
        ev.user_id = std::string(fields[0]);
        if (ev.user_id.empty()) {
            reject("empty user_id");
            continue;
        }
        const auto ts = fields[1];
        auto [ptr, ec] = std::from_chars(ts.data(), ts.data() + ts.size(), ev.local_timestamp);
        if (ec != std::errc{} || ptr != ts.data() + ts.size() || ts.empty()) {
            reject("bad local_timestamp '" + std::string(ts) + "'");
            continue;
        }
        if (ev.local_timestamp < 0) {
            reject("negative local_timestamp");
            continue;
        }
        const auto kind = fields[2];
        if (kind == "app") {
            ev.kind = EventKind::ForegroundApp;
        } else if (kind == "unlock") {
            ev.kind = EventKind::ScreenUnlock;
        } else if (kind == "lock") {
            ev.kind = EventKind::ScreenLock;
        } else {
            reject("unknown kind '" + std::string(kind) + "'");
            continue;
        }
        ev.app_id = std::string(fields[3]);
        if (ev.kind == EventKind::ForegroundApp && ev.app_id.empty()) {
            reject("app event without app_id");
            continue;
        }
        if (ev.kind != EventKind::ForegroundApp && !ev.app_id.empty()) {
            reject(std::string(kind) + " event carries an app_id");
            continue;
        }
        result.events.push_back(std::move(ev));
    }
    if (in.bad()) throw IoError("event log: read failure");
    return result;
}

ParsedLog parse_event_log_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open event log " + path.string());
    return parse_event_log(in);
}

void write_event_log(std::ostream& out, const std::vector<RawEvent>& events) {
    out << kEventLogHeader << '\n';
    for (const auto& ev : events) {
        out << ev.user_id << ',' << ev.local_timestamp << ',' << kind_name(ev.kind) << ','
            << ev.app_id << '\n';
    }
}

SessionizeResult sessionize(const std::vector<RawEvent>& events, Timestamp idle_gap) {
    std::map<std::string, std::vector<const RawEvent*>> per_user;
    for (const auto& ev : events) per_user[ev.user_id].push_back(&ev);

    SessionizeResult result;
    for (auto& [user, evs] : per_user) {
        std::stable_sort(evs.begin(), evs.end(), [](const RawEvent* a, const RawEvent* b) {
            return a->local_timestamp < b->local_timestamp;
        });

        bool open = false;
        bool bracketed = false;  // opened by an unlock
        Session current;

        auto close = [&](Timestamp end) {
            if (open && !current.samples.empty()) {
                current.end = std::max(end, current.samples.back().timestamp);
                result.sessions.push_back(std::move(current));
            }
            current = Session{};
            open = false;
        };
        auto start = [&](bool by_unlock, Timestamp t) {
            current = Session{};
            current.user_id = user;
            current.start = t;
            open = true;
            bracketed = by_unlock;
        };

        for (const RawEvent* ev : evs) {
            const Timestamp t = ev->local_timestamp;
            switch (ev->kind) {
                case EventKind::ScreenUnlock:
                    if (open) {
                        close(current.samples.empty() ? t : current.samples.back().timestamp);
                    }
                    start(true, t);
                    break;
                case EventKind::ScreenLock:
                    if (!open) {
                        ++result.ignored_locks;
                        log::warn("user " + user + ": lock at " + std::to_string(t) +
                                  " without a preceding unlock; ignored");
                        break;
                    }
                    close(t);
                    break;
                case EventKind::ForegroundApp:
                    if (!open) {
                        start(false, t);
                    } else if (!bracketed && !current.samples.empty() &&
                               t - current.samples.back().timestamp > idle_gap) {
                        close(current.samples.back().timestamp);
                        start(false, t);
                    }
                    if (current.samples.empty()) current.start = t;
                    current.samples.push_back({t, ev->app_id});
                    break;
            }
        }
        if (open) close(current.samples.empty() ? 0 : current.samples.back().timestamp);
    }
    return result;
}

std::vector<Session> sample_foreground(const std::vector<Session>& sessions, Timestamp period) {
    if (period <= 0) throw InvalidArgument("sampling period must be positive");
    std::vector<Session> out;
    out.reserve(sessions.size());
    for (const auto& s : sessions) {
        if (s.samples.empty()) continue;
        Session sampled;
        sampled.user_id = s.user_id;
        sampled.start = s.start;
        sampled.end = s.end;
        const Timestamp count = (s.end - s.start) / period + 1;
        sampled.samples.reserve(static_cast<std::size_t>(count));
        std::size_t cursor = 0;
        for (Timestamp k = 0; k < count; ++k) {
            const Timestamp instant = s.start + k * period;
            while (cursor + 1 < s.samples.size() && s.samples[cursor + 1].timestamp <= instant) {
                ++cursor;
            }
            sampled.samples.push_back({instant, s.samples[cursor].app_id});
        }
        out.push_back(std::move(sampled));
    }
    return out;
}

std::vector<Sample> flatten_samples(const std::vector<Session>& sessions) {
    std::vector<Sample> out;
    for (const auto& s : sessions) out.insert(out.end(), s.samples.begin(), s.samples.end());
    return out;
}

namespace {
std::size_t count_samples(const std::vector<Session>& sessions) {
    std::size_t n = 0;
    for (const auto& s : sessions) n += s.samples.size();
    return n;
}
}  // namespace

std::size_t SplitDataset::train_samples() const { return count_samples(train); }
std::size_t SplitDataset::test_samples() const { return count_samples(test); }

std::size_t train_count(std::size_t total, double train_fraction) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw InvalidArgument("train_fraction must lie in (0, 1)");
    }
    // The epsilon absorbs representation error such as 0.29 * 100 = 28.999...
    return static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(total) + 1e-9));
}

SplitDataset chronological_split(const std::vector<Session>& sessions, double train_fraction) {
    const std::size_t total = count_samples(sessions);
    if (total < 2) throw InvalidArgument("chronological_split needs at least 2 samples");
    const std::size_t cut = train_count(total, train_fraction);

    SplitDataset split;
    split.train_fraction = train_fraction;
    std::size_t seen = 0;
    for (const auto& s : sessions) {
        const std::size_t n = s.samples.size();
        if (seen + n <= cut) {
            split.train.push_back(s);
        } else if (seen >= cut) {
            split.test.push_back(s);
        } else {
            const auto mid = static_cast<std::ptrdiff_t>(cut - seen);
            Session head = s;
            Session tail = s;
            head.samples.assign(s.samples.begin(), s.samples.begin() + mid);
            tail.samples.assign(s.samples.begin() + mid, s.samples.end());
            head.end = head.samples.back().timestamp;
            tail.start = tail.samples.front().timestamp;
            split.train.push_back(std::move(head));
            split.test.push_back(std::move(tail));
        }
        seen += n;
    }
    return split;
}

std::vector<std::string> filter_eligible_users(const std::map<std::string, SplitCounts>& splits,
                                               std::size_t min_train, std::size_t min_test) {
    std::vector<std::string> eligible;
    for (const auto& [user, counts] : splits) {
        if (counts.train >= min_train && counts.test >= min_test) eligible.push_back(user);
    }
    return eligible;
}

std::map<std::string, std::vector<Session>> group_by_user(std::vector<Session> sessions) {
    std::map<std::string, std::vector<Session>> out;
    for (auto& s : sessions) out[s.user_id].push_back(std::move(s));
    for (auto& [user, list] : out) {
        std::stable_sort(list.begin(), list.end(),
                         [](const Session& a, const Session& b) { return a.start < b.start; });
    }
    return out;
}

}  // namespace appauth
