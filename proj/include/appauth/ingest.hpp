#pragma once

// Event-log parsing, session reconstruction, fixed-period sampling and
// chronological train/test splitting.

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <vector>

namespace appauth {

/// Seconds since the epoch, already shifted into device-local time.
using Timestamp = std::int64_t;

enum class EventKind { ForegroundApp, ScreenUnlock, ScreenLock };

struct RawEvent {
    std::string user_id;
    Timestamp local_timestamp = 0;
    EventKind kind = EventKind::ForegroundApp;
    std::string app_id;  // empty unless kind == ForegroundApp

    friend bool operator==(const RawEvent&, const RawEvent&) = default;
};

struct RowError {
    std::size_t line = 0;  // 1-based, header is line 1
    std::string message;
};

struct ParsedLog {
    std::vector<RawEvent> events;  // file order
    std::vector<RowError> errors;
};

/// Header line of the event-log CSV.
inline constexpr const char* kEventLogHeader = "user_id,local_timestamp,kind,app_id";

/// Parses the cohort event-log CSV. A bad header throws FormatError; bad rows
/// are recorded in ParsedLog::errors and skipped.
ParsedLog parse_event_log(std::istream& in);
ParsedLog parse_event_log_file(const std::filesystem::path& path);

void write_event_log(std::ostream& out, const std::vector<RawEvent>& events);

struct Sample {
    Timestamp timestamp = 0;
    std::string app_id;

    friend bool operator==(const Sample&, const Sample&) = default;
};

/// A contiguous stretch of phone use. `start` is the first foreground-app
/// event, `end` the lock event (or the last app event when the session was
/// not closed by a lock).
struct Session {
    std::string user_id;
    Timestamp start = 0;
    Timestamp end = 0;
    std::vector<Sample> samples;
};

inline constexpr Timestamp kDefaultIdleGap = 300;

struct SessionizeResult {
    std::vector<Session> sessions;  // grouped by user (lexicographic), then time
    std::size_t ignored_locks = 0;
};

/// Groups events per user and reconstructs sessions. Unlock/lock pairs bound
/// sessions; app events outside any unlock-opened session form implicit
/// sessions that break whenever consecutive app events are more than
/// `idle_gap` seconds apart.
SessionizeResult sessionize(const std::vector<RawEvent>& events,
                            Timestamp idle_gap = kDefaultIdleGap);

/// Resamples each session at a fixed period anchored at session start. The
/// returned sessions carry the sampled (timestamp, app) pairs.
std::vector<Session> sample_foreground(const std::vector<Session>& sessions,
                                       Timestamp period);

/// Concatenation of all session samples in order.
std::vector<Sample> flatten_samples(const std::vector<Session>& sessions);

struct SplitDataset {
    std::vector<Session> train;
    std::vector<Session> test;
    double train_fraction = 0.7;

    std::size_t train_samples() const;
    std::size_t test_samples() const;
};

/// Number of leading samples assigned to training: floor(fraction * total).
std::size_t train_count(std::size_t total, double train_fraction);

/// Splits one user's sampled sessions at sample index
/// floor(train_fraction * total). A session straddling the cut is divided.
SplitDataset chronological_split(const std::vector<Session>& sessions,
                                 double train_fraction);

struct SplitCounts {
    std::size_t train = 0;
    std::size_t test = 0;
};

inline constexpr std::size_t kDefaultMinTrain = 500;
inline constexpr std::size_t kDefaultMinTest = 200;

/// Users with at least `min_train` training and `min_test` test samples.
std::vector<std::string> filter_eligible_users(
    const std::map<std::string, SplitCounts>& splits,
    std::size_t min_train = kDefaultMinTrain, std::size_t min_test = kDefaultMinTest);

/// Sessions of a single user, in time order.
std::map<std::string, std::vector<Session>> group_by_user(std::vector<Session> sessions);

}  // namespace appauth
