#pragma once

// Synthetic app-usage cohorts and the intrusion-injection experiment.

#include "appauth/encode.hpp"
#include "appauth/ingest.hpp"
#include "appauth/pipeline.hpp"
#include "appauth/user_model.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace appauth {

/// Local midnight of Monday 2021-01-04; synthetic logs start here.
inline constexpr Timestamp kSyntheticEpoch = 1609718400;

inline constexpr std::size_t kContextCount = kTimeZoneCount * kDayFlagCount;

inline std::size_t context_index(TimeZoneBin tz, DayFlag day) {
    return static_cast<std::size_t>(tz) * kDayFlagCount + static_cast<std::size_t>(day);
}

struct UserProfile {
    std::string user_id;
    std::vector<std::string> app_pool;
    /// Probability vector over app_pool per (time zone, day flag) context.
    std::array<std::vector<double>, kContextCount> preference;
    std::array<double, kTimeZoneCount> tz_activity{1.0, 1.0, 1.0};  // relative session rates
    double session_rate = 10.0;     // sessions per day
    double session_length = 180.0;  // mean seconds
    double dwell = 45.0;            // mean seconds per app
    std::uint64_t seed = 1;
};

/// Throws InvalidArgument for non-stochastic preferences or non-positive rates.
void validate(const UserProfile& profile);

/// Sessions arrive as a (time-zone modulated) Poisson process; inside a
/// session apps are drawn from the context's preference vector and held for
/// exponential dwell times. Emits unlock, app and lock events.
std::vector<RawEvent> generate_synthetic_user(const UserProfile& profile, int days,
                                              Timestamp start = kSyntheticEpoch);

struct CohortSpec {
    std::size_t users = 10;
    double overlap = 0.5;  // fraction of each user's pool shared by all users
    int days = 30;
    std::uint64_t seed = 1;
    std::size_t apps_per_user = 20;
    double session_rate = 10.0;
    double session_length = 180.0;
    double dwell = 45.0;
    /// Zipf exponent of each user's base app popularity.
    double popularity_skew = 1.0;
    /// Spread of the per-context log-multipliers applied to the base popularity.
    double context_spread = 1.0;
    bool identical_preferences = false;
};

void validate(const CohortSpec& spec);

std::vector<UserProfile> make_profiles(const CohortSpec& spec);
std::vector<RawEvent> make_cohort(const CohortSpec& spec);

inline constexpr std::size_t kIntrusionSegment = 200;

/// `segment` consecutive genuine observations followed by `segment`
/// consecutive intruder observations, each slice starting at a seeded
/// random offset.
ObservationSequence inject_intrusion(const ObservationSequence& genuine,
                                     const ObservationSequence& intruder, std::uint64_t seed,
                                     std::size_t segment = kIntrusionSegment);

struct IntrusionTrace {
    std::string model_owner;
    std::string intruder;
    std::size_t n = 0;
    std::size_t splice = kIntrusionSegment;  // index of the first intruder observation
    ObservationSequence genuine_segment;
    ObservationSequence intruder_segment;
    std::vector<std::size_t> end_indices;  // n-1 .. 2*splice-1
    std::vector<double> scores;
};

IntrusionTrace intrusion_experiment(const UserModel& model, const ObservationSequence& concatenated,
                                    std::size_t n, std::size_t splice = kIntrusionSegment);

/// Windows after the splice until the first score below threshold:
/// (first end index >= splice with score < threshold) - (splice - 1).
std::optional<std::size_t> detection_latency(const IntrusionTrace& trace, double threshold);

struct IntrusionOptions {
    std::vector<std::size_t> n_values{20, 30, 40, 50, 60};
    std::size_t segment = kIntrusionSegment;
    std::uint64_t seed = 1;
    /// Fixed decision threshold; when unset, the per-model percentile of
    /// genuine test-window scores is used.
    std::optional<double> threshold;
    double genuine_percentile = 5.0;
    std::size_t jobs = 1;
};

struct LatencyRow {
    std::string model_owner;
    std::string intruder;
    std::size_t n = 0;
    double threshold = 0.0;
    std::optional<std::size_t> latency;
};

struct CurvePoint {
    std::size_t n = 0;
    std::size_t window_index = 0;  // end index in the concatenated sequence
    double mean_score = 0.0;
};

struct IntrusionReport {
    std::vector<CurvePoint> curve;
    std::vector<LatencyRow> latency;
};

/// Every eligible user against every other user as intruder, for each n.
/// Users whose test sequences are shorter than the segment are skipped.
IntrusionReport run_intrusion_study(const PreparedCohort& cohort,
                                    const std::vector<UserModel>& models,
                                    const IntrusionOptions& options);

void write_intrusion_curve_csv(std::ostream& out, const std::vector<CurvePoint>& curve);
void write_latency_csv(std::ostream& out, const std::vector<LatencyRow>& rows);

}  // namespace appauth
