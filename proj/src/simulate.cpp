#include "appauth/simulate.hpp"

#include "appauth/error.hpp"
#include "appauth/parallel.hpp"
#include "appauth/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <ostream>

namespace appauth {
namespace {

double standard_normal(Rng& rng) {
    const double u1 = uniform_open0(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::size_t draw_categorical(Rng& rng, const std::vector<double>& probs) {
    const double u = uniform01(rng);
    double acc = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        acc += probs[k];
        if (u < acc) return k;
    }
    return probs.size() - 1;
}

std::string app_name(const char* group, std::size_t k) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "com.%s.app%02zu", group, k);
    return buf;
}

}  // namespace

void validate(const UserProfile& p) {
    if (p.app_pool.empty()) throw InvalidArgument("profile " + p.user_id + ": empty app pool");
    if (!(p.session_rate > 0 && p.session_length > 0 && p.dwell > 0)) {
        throw InvalidArgument("profile " + p.user_id + ": rates must be positive");
    }
    for (double a : p.tz_activity) {
        if (!(a > 0)) throw InvalidArgument("profile " + p.user_id + ": activity must be positive");
    }
    for (const auto& pref : p.preference) {
        if (pref.size() != p.app_pool.size()) {
            throw InvalidArgument("profile " + p.user_id + ": preference size mismatch");
        }
        double sum = 0.0;
        for (double v : pref) {
            if (v < 0) throw InvalidArgument("profile " + p.user_id + ": negative preference");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            throw InvalidArgument("profile " + p.user_id + ": preference is not stochastic");
        }
    }
}

std::vector<RawEvent> generate_synthetic_user(const UserProfile& profile, int days,
                                              Timestamp start) {
    validate(profile);
    std::vector<RawEvent> events;
    if (days <= 0) return events;

    Rng rng(profile.seed);
    const auto& act = profile.tz_activity;
    const double mean_act = (act[0] + act[1] + act[2]) / 3.0;
    const double max_act = std::max({act[0], act[1], act[2]});
    const double peak_rate = profile.session_rate / 86400.0 * max_act / mean_act;  // per second
    const double horizon = static_cast<double>(days) * 86400.0;

    auto emit = [&](Timestamp t, EventKind kind, std::string app = {}) {
        events.push_back({profile.user_id, start + t, kind, std::move(app)});
    };

    double t = 0.0;
    while (true) {
        t += exponential(rng, 1.0 / peak_rate);
        if (t >= horizon) break;
        const auto s = static_cast<Timestamp>(t);
        const double accept = act[static_cast<std::size_t>(timezone_at(start + s))] / max_act;
        if (uniform01(rng) >= accept) continue;

        const auto length =
            std::max<Timestamp>(1, std::llround(exponential(rng, profile.session_length)));
        emit(s, EventKind::ScreenUnlock);
        for (Timestamp cur = s; cur < s + length;) {
            const Timestamp abs = start + cur;
            const auto& pref = profile.preference[context_index(timezone_at(abs), day_flag_at(abs))];
            emit(cur, EventKind::ForegroundApp, profile.app_pool[draw_categorical(rng, pref)]);
            cur += std::max<Timestamp>(1, std::llround(exponential(rng, profile.dwell)));
        }
        emit(s + length, EventKind::ScreenLock);
        t = static_cast<double>(s + length + 1);
    }
    return events;
}

void validate(const CohortSpec& spec) {
    if (spec.users == 0) throw InvalidArgument("cohort needs at least one user");
    if (!(spec.overlap >= 0.0 && spec.overlap <= 1.0)) {
        throw InvalidArgument("cohort overlap must lie in [0, 1]");
    }
    if (spec.days < 0) throw InvalidArgument("cohort days must be non-negative");
    if (spec.apps_per_user == 0) throw InvalidArgument("cohort needs apps_per_user > 0");
    if (!(spec.session_rate > 0 && spec.session_length > 0 && spec.dwell > 0)) {
        throw InvalidArgument("cohort rates must be positive");
    }
    if (!(spec.popularity_skew >= 0 && spec.context_spread >= 0)) {
        throw InvalidArgument("cohort skew and spread must be non-negative");
    }
}

std::vector<UserProfile> make_profiles(const CohortSpec& spec) {
    validate(spec);
    const std::size_t pool = spec.apps_per_user;
    const auto shared = static_cast<std::size_t>(std::llround(spec.overlap * static_cast<double>(pool)));

    std::vector<UserProfile> profiles;
    for (std::size_t u = 0; u < spec.users; ++u) {
        char id[32];
        std::snprintf(id, sizeof id, "u%02zu", u);
        UserProfile p;
        p.user_id = id;
        p.seed = derive_seed(spec.seed, 2 * u + 1);
        for (std::size_t k = 0; k < shared; ++k) p.app_pool.push_back(app_name("shared", k));
        for (std::size_t k = shared; k < pool; ++k) p.app_pool.push_back(app_name(id, k));

        Rng rng(spec.identical_preferences ? derive_seed(spec.seed, 0) : derive_seed(spec.seed, 2 * u + 2));
        std::vector<std::size_t> order(pool);
        std::iota(order.begin(), order.end(), 0);
        for (std::size_t k = pool; k > 1; --k) std::swap(order[k - 1], order[uniform_index(rng, k)]);
        std::vector<double> base(pool);
        for (std::size_t r = 0; r < pool; ++r) {
            base[order[r]] = 1.0 / std::pow(static_cast<double>(r + 1), spec.popularity_skew);
        }
        for (auto& pref : p.preference) {
            pref.resize(pool);
            double sum = 0.0;
            for (std::size_t k = 0; k < pool; ++k) {
                pref[k] = base[k] * std::exp(spec.context_spread * standard_normal(rng));
                sum += pref[k];
            }
            for (double& v : pref) v /= sum;
        }
        const std::array<double, 3> typical{0.25, 1.0, 1.2};
        for (std::size_t z = 0; z < 3; ++z) {
            p.tz_activity[z] = typical[z] * std::exp(0.4 * standard_normal(rng));
        }
        p.session_rate = spec.session_rate;
        p.session_length = spec.session_length;
        p.dwell = spec.dwell;
        profiles.push_back(std::move(p));
    }
    return profiles;
}

std::vector<RawEvent> make_cohort(const CohortSpec& spec) {
    std::vector<RawEvent> events;
    for (const auto& p : make_profiles(spec)) {
        auto user_events = generate_synthetic_user(p, spec.days);
        events.insert(events.end(), std::make_move_iterator(user_events.begin()),
                      std::make_move_iterator(user_events.end()));
    }
    return events;
}

ObservationSequence inject_intrusion(const ObservationSequence& genuine,
                                     const ObservationSequence& intruder, std::uint64_t seed,
                                     std::size_t segment) {
    if (segment == 0) throw InvalidArgument("intrusion segment must be positive");
    if (genuine.size() < segment || intruder.size() < segment) {
        throw InvalidArgument("intrusion needs at least " + std::to_string(segment) +
                              " observations in both sequences");
    }
    Rng rng(seed);
    const auto g0 = uniform_index(rng, genuine.size() - segment + 1);
    const auto i0 = uniform_index(rng, intruder.size() - segment + 1);
    ObservationSequence out;
    out.owner = genuine.owner;
    for (std::size_t k = 0; k < segment; ++k) out.push(genuine.symbols[g0 + k], genuine.timestamps[g0 + k]);
    for (std::size_t k = 0; k < segment; ++k) out.push(intruder.symbols[i0 + k], intruder.timestamps[i0 + k]);
    return out;
}

IntrusionTrace intrusion_experiment(const UserModel& model, const ObservationSequence& concatenated,
                                    std::size_t n, std::size_t splice) {
    if (n == 0) throw InvalidArgument("window length must be positive");
    if (splice == 0 || splice > concatenated.size()) throw InvalidArgument("bad splice position");
    if (n > concatenated.size()) throw InvalidArgument("window longer than the intrusion sequence");
    IntrusionTrace trace;
    trace.model_owner = model.owner();
    trace.n = n;
    trace.splice = splice;
    auto slice = [&](std::size_t b, std::size_t e) {
        ObservationSequence s;
        s.owner = concatenated.owner;
        s.symbols.assign(concatenated.symbols.begin() + b, concatenated.symbols.begin() + e);
        s.timestamps.assign(concatenated.timestamps.begin() + b, concatenated.timestamps.begin() + e);
        return s;
    };
    trace.genuine_segment = slice(0, splice);
    trace.intruder_segment = slice(splice, concatenated.size());

    const auto indices = to_indices(concatenated, model.vocabulary());
    for (std::size_t end = n - 1; end < indices.size(); ++end) {
        trace.end_indices.push_back(end);
        trace.scores.push_back(model.score(std::span(indices).subspan(end + 1 - n, n)));
    }
    return trace;
}

std::optional<std::size_t> detection_latency(const IntrusionTrace& trace, double threshold) {
    for (std::size_t k = 0; k < trace.scores.size(); ++k) {
        const std::size_t end = trace.end_indices[k];
        if (end >= trace.splice && trace.scores[k] < threshold) return end - (trace.splice - 1);
    }
    return std::nullopt;
}

IntrusionReport run_intrusion_study(const PreparedCohort& cohort,
                                    const std::vector<UserModel>& models,
                                    const IntrusionOptions& options) {
    std::map<std::string, const UserData*> by_user;
    for (const auto& u : cohort.users) by_user[u.user] = &u;

    std::vector<const UserData*> usable;
    for (const auto& u : cohort.users) {
        if (u.test.size() >= options.segment) usable.push_back(&u);
    }

    struct Partial {
        std::vector<LatencyRow> rows;
        std::map<std::pair<std::size_t, std::size_t>, std::pair<double, std::size_t>> sums;
    };
    std::vector<Partial> partials(models.size());

    parallel_for(models.size(), options.jobs, [&](std::size_t mi) {
        const UserModel& model = models[mi];
        const auto it = by_user.find(model.owner());
        if (it == by_user.end() || it->second->test.size() < options.segment) return;
        const UserData& genuine = *it->second;
        const auto own = to_indices(genuine.test, model.vocabulary());
        Partial& part = partials[mi];

        for (std::size_t n : options.n_values) {
            double threshold = 0.0;
            if (options.threshold) {
                threshold = *options.threshold;
            } else {
                std::vector<double> scores;
                for (std::size_t end = n - 1; end < own.size(); ++end) {
                    scores.push_back(model.score(std::span(own).subspan(end + 1 - n, n)));
                }
                threshold = percentile(std::move(scores), options.genuine_percentile);
            }
            for (std::size_t ji = 0; ji < usable.size(); ++ji) {
                const UserData& intruder = *usable[ji];
                if (intruder.user == genuine.user) continue;
                const auto seed = derive_seed(options.seed, mi * usable.size() + ji);
                const auto seq = inject_intrusion(genuine.test, intruder.test, seed, options.segment);
                auto trace = intrusion_experiment(model, seq, n, options.segment);
                trace.intruder = intruder.user;
                part.rows.push_back({genuine.user, intruder.user, n, threshold,
                                     detection_latency(trace, threshold)});
                for (std::size_t k = 0; k < trace.scores.size(); ++k) {
                    auto& acc = part.sums[{n, trace.end_indices[k]}];
                    acc.first += trace.scores[k];
                    acc.second += 1;
                }
            }
        }
    });

    IntrusionReport report;
    std::map<std::pair<std::size_t, std::size_t>, std::pair<double, std::size_t>> sums;
    for (auto& part : partials) {
        report.latency.insert(report.latency.end(), part.rows.begin(), part.rows.end());
        for (const auto& [key, acc] : part.sums) {
            sums[key].first += acc.first;
            sums[key].second += acc.second;
        }
    }
    for (const auto& [key, acc] : sums) {
        report.curve.push_back({key.first, key.second, acc.first / static_cast<double>(acc.second)});
    }
    std::stable_sort(report.latency.begin(), report.latency.end(),
                     [](const LatencyRow& a, const LatencyRow& b) {
                         if (a.model_owner != b.model_owner) return a.model_owner < b.model_owner;
                         if (a.intruder != b.intruder) return a.intruder < b.intruder;
                         return a.n < b.n;
                     });
    return report;
}

void write_intrusion_curve_csv(std::ostream& out, const std::vector<CurvePoint>& curve) {
    out << "n,window_index,mean_score\n";
    for (const auto& p : curve) {
        out << p.n << ',' << p.window_index << ',' << format_number(p.mean_score) << '\n';
    }
}

void write_latency_csv(std::ostream& out, const std::vector<LatencyRow>& rows) {
    out << "model_owner,intruder,n,threshold,latency_windows,detected_flag\n";
    for (const auto& r : rows) {
        out << r.model_owner << ',' << r.intruder << ',' << r.n << ',' << format_number(r.threshold)
            << ',' << (r.latency ? std::to_string(*r.latency) : std::string("not_detected")) << ','
            << (r.latency ? 1 : 0) << '\n';
    }
}

}  // namespace appauth
