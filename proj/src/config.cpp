#include "appauth/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>

#ifndef APPAUTH_VERSION
#define APPAUTH_VERSION "0.0.0"
#endif

namespace appauth {
namespace {

using json = nlohmann::json;

const std::set<std::string> kTopKeys{
    "events", "synthetic", "periods", "n_values", "train_fraction", "methods", "delta",
    "hidden_states", "max_iter", "convergence_tol", "seed", "stride", "idle_gap", "min_train",
    "min_test", "intrusion_segment", "genuine_percentile", "threshold", "out", "jobs"};

const std::set<std::string> kCohortKeys{
    "users", "overlap", "days", "apps_per_user", "session_rate", "session_length", "dwell",
    "popularity_skew", "context_spread", "identical_preferences"};

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& [key, value] : j.items()) {
        if (!allowed.contains(key)) throw ConfigError("unknown config key '" + where + key + "'");
    }
}

template <typename T>
void read(const json& j, const char* key, T& target) {
    if (!j.contains(key)) return;
    try {
        target = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config key '") + key + "' has the wrong type");
    }
}

CohortSpec cohort_from_json(const json& j) {
    check_keys(j, kCohortKeys, "synthetic.");
    CohortSpec spec;
    read(j, "users", spec.users);
    read(j, "overlap", spec.overlap);
    read(j, "days", spec.days);
    read(j, "apps_per_user", spec.apps_per_user);
    read(j, "session_rate", spec.session_rate);
    read(j, "session_length", spec.session_length);
    read(j, "dwell", spec.dwell);
    read(j, "popularity_skew", spec.popularity_skew);
    read(j, "context_spread", spec.context_spread);
    read(j, "identical_preferences", spec.identical_preferences);
    return spec;
}

json cohort_to_json(const CohortSpec& s) {
    return {{"users", s.users},
            {"overlap", s.overlap},
            {"days", s.days},
            {"apps_per_user", s.apps_per_user},
            {"session_rate", s.session_rate},
            {"session_length", s.session_length},
            {"dwell", s.dwell},
            {"popularity_skew", s.popularity_skew},
            {"context_spread", s.context_spread},
            {"identical_preferences", s.identical_preferences}};
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

PipelineOptions ExperimentConfig::pipeline(Timestamp period) const {
    PipelineOptions o;
    o.period = period;
    o.train_fraction = train_fraction;
    o.idle_gap = idle_gap;
    o.min_train = min_train;
    o.min_test = min_test;
    return o;
}

ModelConfig ExperimentConfig::model() const {
    ModelConfig m;
    m.smoothing.delta = delta;
    m.hmm.hidden_states = hidden_states;
    m.hmm.max_iter = max_iter;
    m.hmm.convergence_tol = convergence_tol;
    m.hmm.seed = seed;
    return m;
}

CohortSpec ExperimentConfig::cohort() const {
    CohortSpec spec = synthetic.value_or(CohortSpec{});
    spec.seed = seed;
    return spec;
}

ExperimentConfig config_from_json(const json& j) {
    check_keys(j, kTopKeys, "");
    ExperimentConfig c;
    read(j, "events", c.events);
    if (j.contains("synthetic")) c.synthetic = cohort_from_json(j.at("synthetic"));
    read(j, "periods", c.periods);
    read(j, "n_values", c.n_values);
    read(j, "train_fraction", c.train_fraction);
    if (j.contains("methods")) {
        std::vector<std::string> tags;
        read(j, "methods", tags);
        c.methods.clear();
        for (const auto& t : tags) {
            try {
                c.methods.push_back(parse_method(t));
            } catch (const InvalidArgument& e) {
                throw ConfigError(e.what());
            }
        }
    }
    read(j, "delta", c.delta);
    read(j, "hidden_states", c.hidden_states);
    read(j, "max_iter", c.max_iter);
    read(j, "convergence_tol", c.convergence_tol);
    read(j, "seed", c.seed);
    read(j, "stride", c.stride);
    read(j, "idle_gap", c.idle_gap);
    read(j, "min_train", c.min_train);
    read(j, "min_test", c.min_test);
    read(j, "intrusion_segment", c.intrusion_segment);
    read(j, "genuine_percentile", c.genuine_percentile);
    if (j.contains("threshold") && !j.at("threshold").is_null()) {
        double t = 0;
        read(j, "threshold", t);
        c.threshold = t;
    }
    read(j, "out", c.out);
    read(j, "jobs", c.jobs);
    validate(c);
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("config " + path.string() + ": " + e.what());
    }
    return config_from_json(j);
}

json to_json(const ExperimentConfig& c) {
    std::vector<std::string> methods;
    for (Method m : c.methods) methods.emplace_back(method_tag(m));
    json j{{"events", c.events},
           {"periods", c.periods},
           {"n_values", c.n_values},
           {"train_fraction", c.train_fraction},
           {"methods", methods},
           {"delta", c.delta},
           {"hidden_states", c.hidden_states},
           {"max_iter", c.max_iter},
           {"convergence_tol", c.convergence_tol},
           {"seed", c.seed},
           {"stride", c.stride},
           {"idle_gap", c.idle_gap},
           {"min_train", c.min_train},
           {"min_test", c.min_test},
           {"intrusion_segment", c.intrusion_segment},
           {"genuine_percentile", c.genuine_percentile},
           {"threshold", c.threshold ? json(*c.threshold) : json(nullptr)},
           {"out", c.out}};
    if (c.synthetic) j["synthetic"] = cohort_to_json(*c.synthetic);
    return j;
}

void validate(const ExperimentConfig& c) {
    if (c.periods.empty()) throw ConfigError("periods must be non-empty");
    for (auto p : c.periods) {
        if (p <= 0) throw ConfigError("periods must be positive");
    }
    if (c.n_values.empty()) throw ConfigError("n_values must be non-empty");
    for (auto n : c.n_values) {
        if (n == 0) throw ConfigError("n_values must be positive");
    }
    if (c.methods.empty()) throw ConfigError("methods must be non-empty");
    if (!(c.train_fraction > 0.0 && c.train_fraction < 1.0)) {
        throw ConfigError("train_fraction must lie in (0, 1)");
    }
    if (!(c.delta > 0.0 && c.delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
    if (c.hidden_states == 0) throw ConfigError("hidden_states must be positive");
    if (c.stride == 0) throw ConfigError("stride must be positive");
    if (c.idle_gap <= 0) throw ConfigError("idle_gap must be positive");
    if (c.intrusion_segment == 0) throw ConfigError("intrusion_segment must be positive");
    if (!(c.genuine_percentile >= 0.0 && c.genuine_percentile <= 100.0)) {
        throw ConfigError("genuine_percentile must lie in [0, 100]");
    }
    if (c.jobs == 0) throw ConfigError("jobs must be positive");
    if (c.synthetic) {
        try {
            validate(c.cohort());
        } catch (const InvalidArgument& e) {
            throw ConfigError(e.what());
        }
    }
}

std::string config_hash(const ExperimentConfig& config) {
    auto j = to_json(config);
    j.erase("out");
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(j.dump())));
    return buf;
}

void write_manifest(const std::filesystem::path& dir, const std::string& command,
                    const ExperimentConfig& config, const json& inputs) {
    std::filesystem::create_directories(dir);
    auto cfg = to_json(config);
    cfg.erase("out");
    const json manifest{{"tool", "appauth"},
                        {"version", library_version()},
                        {"command", command},
                        {"seed", config.seed},
                        {"config_hash", config_hash(config)},
                        {"config", cfg},
                        {"inputs", inputs}};
    std::ofstream out(dir / "manifest.json");
    if (!out) throw IoError("cannot write " + (dir / "manifest.json").string());
    out << manifest.dump(2) << '\n';
}

std::string library_version() { return APPAUTH_VERSION; }

}  // namespace appauth
