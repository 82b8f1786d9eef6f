// appauth: command-line front end for ingestion, training, scoring,
// evaluation, statistics, intrusion simulation and synthetic cohorts.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.

#include "appauth/config.hpp"
#include "appauth/error.hpp"
#include "appauth/eval.hpp"
#include "appauth/log.hpp"
#include "appauth/parallel.hpp"
#include "appauth/pipeline.hpp"
#include "appauth/simulate.hpp"
#include "appauth/stats.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace appauth;

namespace {

struct Flags {
    std::string config;
    std::vector<std::string> methods;
    std::vector<std::size_t> n_values;
    std::vector<Timestamp> periods;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::size_t> jobs;
    std::optional<std::string> events;
    std::string sequences;
    std::string models;
    bool verbose = false;
    bool quiet = false;
};

ExperimentConfig resolve(const Flags& f) {
    ExperimentConfig c = f.config.empty() ? ExperimentConfig{} : load_config(f.config);
    if (!f.methods.empty()) {
        c.methods.clear();
        for (const auto& t : f.methods) {
            try {
                c.methods.push_back(parse_method(t));
            } catch (const InvalidArgument& e) {
                throw ConfigError(e.what());
            }
        }
    }
    if (!f.n_values.empty()) c.n_values = f.n_values;
    if (!f.periods.empty()) c.periods = f.periods;
    if (f.seed) c.seed = *f.seed;
    if (f.out) c.out = *f.out;
    if (f.jobs) c.jobs = *f.jobs;
    if (f.events) c.events = *f.events;
    validate(c);
    return c;
}

std::ofstream open_output(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

// Commands that work on a single sampling period use the largest listed one.
Timestamp single_period(const ExperimentConfig& c) {
    return *std::max_element(c.periods.begin(), c.periods.end());
}

std::vector<RawEvent> load_events(const ExperimentConfig& c, nlohmann::json& inputs) {
    if (!c.events.empty()) {
        auto parsed = parse_event_log_file(c.events);
        for (const auto& e : parsed.errors) {
            log::warn(c.events + ":" + std::to_string(e.line) + ": " + e.message);
        }
        inputs["events"] = c.events;
        inputs["row_errors"] = parsed.errors.size();
        return std::move(parsed.events);
    }
    if (c.synthetic) {
        inputs["synthetic"] = true;
        return make_cohort(c.cohort());
    }
    throw ConfigError("no data source: pass --events or set 'events' or 'synthetic' in the config");
}

PreparedCohort load_cohort(const ExperimentConfig& c, Timestamp period, nlohmann::json& inputs) {
    const auto events = load_events(c, inputs);
    auto cohort = prepare_cohort(events, c.pipeline(period));
    log::info("period " + std::to_string(period) + "s: " + std::to_string(cohort.users.size()) +
              " eligible users of " + std::to_string(cohort.counts.size()));
    return cohort;
}

// --- synth -----------------------------------------------------------------

int cmd_synth(const ExperimentConfig& c) {
    const fs::path dir = c.out;
    const auto spec = c.cohort();
    const auto events = make_cohort(spec);
    auto out = open_output(dir / "events.csv");
    write_event_log(out, events);
    write_manifest(dir, "synth", c, {{"events_written", events.size()}});
    return 0;
}

// --- ingest ----------------------------------------------------------------

int cmd_ingest(const ExperimentConfig& c) {
    const fs::path dir = c.out;
    const Timestamp period = single_period(c);
    nlohmann::json inputs{{"period", period}};

    std::vector<RawEvent> events;
    if (!c.events.empty()) {
        ParsedLog parsed;
        auto errors = open_output(dir / "row_errors.csv");
        errors << "line,message\n";
        try {
            parsed = parse_event_log_file(c.events);
        } catch (const FormatError& e) {
            errors << 1 << ",\"" << e.what() << "\"\n";
            throw;
        }
        for (const auto& e : parsed.errors) errors << e.line << ",\"" << e.message << "\"\n";
        inputs["events"] = c.events;
        inputs["row_errors"] = parsed.errors.size();
        events = std::move(parsed.events);
    } else {
        events = load_events(c, inputs);
    }

    const auto cohort = prepare_cohort(events, c.pipeline(period));
    std::vector<std::string> eligible;
    for (const auto& u : cohort.users) {
        eligible.push_back(u.user);
        auto train = open_output(dir / "sequences" / (u.user + "_train.csv"));
        write_sequence_csv(train, u.train);
        auto test = open_output(dir / "sequences" / (u.user + "_test.csv"));
        write_sequence_csv(test, u.test);
    }
    auto report = open_output(dir / "ingest_report.csv");
    report << "user,train_samples,test_samples,eligible\n";
    for (const auto& [user, counts] : cohort.counts) {
        const bool ok = std::find(eligible.begin(), eligible.end(), user) != eligible.end();
        report << user << ',' << counts.train << ',' << counts.test << ',' << (ok ? 1 : 0) << '\n';
    }
    inputs["eligible_users"] = eligible;
    write_manifest(dir, "ingest", c, inputs);
    return 0;
}

// --- train / score ---------------------------------------------------------

struct SequenceFile {
    std::string user;
    ObservationSequence seq;
};

std::vector<SequenceFile> read_sequence_dir(const fs::path& dir, const std::string& suffix) {
    if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
    std::vector<fs::path> paths;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const auto name = entry.path().filename().string();
        if (name.size() > suffix.size() && name.ends_with(suffix)) paths.push_back(entry.path());
    }
    std::sort(paths.begin(), paths.end());
    std::vector<SequenceFile> out;
    for (const auto& p : paths) {
        std::ifstream in(p);
        if (!in) throw IoError("cannot open " + p.string());
        auto seqs = read_sequence_csv(in);
        if (seqs.empty()) {
            log::warn(p.string() + ": no observations, skipped");
            continue;
        }
        if (seqs.size() > 1) throw FormatError(p.string() + ": more than one owner");
        const auto name = p.filename().string();
        out.push_back({name.substr(0, name.size() - suffix.size()), std::move(seqs.front())});
    }
    return out;
}

int cmd_train(const ExperimentConfig& c, const std::string& sequences) {
    if (sequences.empty()) throw ConfigError("train needs --sequences <dir>");
    const fs::path dir = c.out;
    const auto users = read_sequence_dir(sequences, "_train.csv");
    if (users.empty()) throw IoError("no *_train.csv files in " + sequences);
    fs::create_directories(dir / "models");
    parallel_for(users.size(), c.jobs, [&](std::size_t i) {
        const auto cfg = config_for_user(c.model(), users[i].user);
        for (Method m : c.methods) {
            const auto model = train_user_model(m, users[i].seq, cfg);
            auto out = open_output(dir / "models" / (users[i].user + "." + std::string(method_tag(m)) + ".json"));
            save_model(out, model);
        }
    });
    write_manifest(dir, "train", c, {{"sequences", sequences}, {"users", users.size()}});
    return 0;
}

std::vector<UserModel> load_models(const fs::path& path) {
    std::vector<fs::path> files;
    if (fs::is_directory(path)) {
        for (const auto& entry : fs::directory_iterator(path)) {
            if (entry.path().extension() == ".json") files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
    } else {
        files.push_back(path);
    }
    std::vector<UserModel> models;
    for (const auto& f : files) {
        std::ifstream in(f);
        if (!in) throw IoError("cannot open " + f.string());
        models.push_back(load_model(in));
    }
    return models;
}

int cmd_score(const ExperimentConfig& c, const Flags& flags) {
    if (flags.models.empty() || flags.sequences.empty()) {
        throw ConfigError("score needs --models <dir|file> and --sequences <dir>");
    }
    const fs::path dir = c.out;
    auto models = load_models(flags.models);
    if (!flags.methods.empty()) {
        std::erase_if(models, [&](const UserModel& m) {
            return std::find(c.methods.begin(), c.methods.end(), m.method()) == c.methods.end();
        });
    }
    if (models.empty()) throw IoError("no models to score with in " + flags.models);
    for (const auto& m : models) {
        if (m.method() != models.front().method()) {
            throw ConfigError("models of several methods found; select one with --method");
        }
    }
    std::vector<ObservationSequence> tests;
    for (auto& f : read_sequence_dir(flags.sequences, "_test.csv")) tests.push_back(std::move(f.seq));

    const std::size_t n = c.n_values.front();
    const auto records = generate_score_records(models, tests, n, c.stride, c.jobs);
    if (records.empty()) log::warn("no test sequence is long enough for n=" + std::to_string(n));
    auto out = open_output(dir / "scores.csv");
    write_scores_csv(out, records);
    write_manifest(dir, "score", c,
                   {{"models", flags.models},
                    {"sequences", flags.sequences},
                    {"method", method_tag(models.front().method())},
                    {"n", n}});
    return 0;
}

// --- eval ------------------------------------------------------------------

// Operating point closest to the EER; the lowest such threshold wins ties.
double eer_threshold(const RocCurve& curve) {
    const RocPoint* best = &curve.points.front();
    for (const auto& p : curve.points) {
        if (std::abs(p.far - p.frr) < std::abs(best->far - best->frr)) best = &p;
    }
    return best->threshold;
}

std::string metric_or_blank(double (*metric)(const ConfusionCounts&), const ConfusionCounts& cc) {
    try {
        return format_number(metric(cc));
    } catch (const UndefinedMetric&) {
        return "";
    }
}

int cmd_eval(const ExperimentConfig& c) {
    const fs::path dir = c.out;
    const Timestamp roc_period = single_period(c);
    const std::size_t roc_n = c.n_values.front();
    nlohmann::json inputs{{"roc_period", roc_period}, {"roc_n", roc_n}};
    const auto events = load_events(c, inputs);

    std::vector<EerGrid> grids;
    std::vector<std::ostringstream> metrics(c.methods.size());
    std::vector<std::optional<RocCurve>> rocs(c.methods.size());
    for (Method m : c.methods) {
        EerGrid g;
        g.method = m;
        g.n_values = c.n_values;
        g.periods = c.periods;
        g.eer.assign(c.n_values.size(), std::vector<double>(c.periods.size(), std::nan("")));
        grids.push_back(std::move(g));
    }
    for (auto& m : metrics) m << "period,n,threshold,sensitivity,specificity,accuracy,f1\n";

    for (std::size_t pi = 0; pi < c.periods.size(); ++pi) {
        const Timestamp period = c.periods[pi];
        const auto cohort = prepare_cohort(events, c.pipeline(period));
        if (cohort.users.size() < 2) {
            log::warn("period " + std::to_string(period) + "s: fewer than two eligible users, skipped");
            continue;
        }
        const auto tests = cohort.test_sequences();
        for (std::size_t mi = 0; mi < c.methods.size(); ++mi) {
            const auto models = train_models(cohort, c.methods[mi], c.model(), c.jobs);
            for (std::size_t ni = 0; ni < c.n_values.size(); ++ni) {
                const std::size_t n = c.n_values[ni];
                const auto records = generate_score_records(models, tests, n, c.stride, c.jobs);
                bool genuine = false, impostor = false;
                for (const auto& r : records) (r.genuine() ? genuine : impostor) = true;
                if (!genuine || !impostor) continue;
                const auto curve = roc_curve(records);
                grids[mi].eer[ni][pi] = equal_error_rate(curve);
                const double t = eer_threshold(curve);
                const auto cc = confusion_counts(records, t);
                metrics[mi] << period << ',' << n << ',' << format_number(t) << ','
                            << metric_or_blank(sensitivity, cc) << ','
                            << metric_or_blank(specificity, cc) << ','
                            << metric_or_blank(accuracy, cc) << ','
                            << metric_or_blank(f1_score, cc) << '\n';
                if (period == roc_period && n == roc_n) rocs[mi] = curve;
            }
        }
    }

    for (std::size_t mi = 0; mi < c.methods.size(); ++mi) {
        const std::string tag(method_tag(c.methods[mi]));
        auto grid = open_output(dir / ("eer_grid_" + tag + ".csv"));
        write_eer_grid_csv(grid, grids[mi]);
        auto met = open_output(dir / ("metrics_" + tag + ".csv"));
        met << metrics[mi].str();
        if (rocs[mi]) {
            auto roc = open_output(dir / ("roc_" + tag + ".csv"));
            write_roc_csv(roc, *rocs[mi]);
        }
    }
    write_manifest(dir, "eval", c, inputs);
    return 0;
}

// --- stats -----------------------------------------------------------------

int cmd_stats(const ExperimentConfig& c) {
    const fs::path dir = c.out;
    const Timestamp period = single_period(c);
    nlohmann::json inputs{{"period", period}};
    const auto cohort = load_cohort(c, period, inputs);
    if (cohort.users.empty()) throw InvalidArgument("no eligible users");

    std::vector<std::string> labels;
    std::vector<Vocabulary> vocabs;
    std::vector<SymbolSet> symbols;
    std::map<std::string, std::vector<std::string>> samples;
    for (const auto& u : cohort.users) {
        labels.push_back(u.user);
        vocabs.push_back(build_vocabulary(u.train));
        symbols.push_back(symbol_set(u.train));
        auto& apps = samples[u.user];
        for (const auto* seq : {&u.train, &u.test}) {
            for (const auto& s : seq->symbols) {
                if (s.kind == SymbolKind::App) apps.push_back(s.app);
            }
        }
    }
    if (cohort.users.size() >= 2) {
        auto app = open_output(dir / "similarity_app.csv");
        write_matrix_csv(app, labels, app_similarity_matrix(vocabs));
        auto obs = open_output(dir / "similarity_obs.csv");
        write_matrix_csv(obs, labels, observation_similarity_matrix(symbols));
    } else {
        log::warn("similarity matrices need at least two eligible users");
    }
    const auto unknown = unknown_app_stats(vocabs, cohort.test_sequences());
    auto us = open_output(dir / "unknown_stats.csv");
    write_unknown_stats_csv(us, unknown);
    auto summary = open_output(dir / "unknown_summary.csv");
    write_unknown_summary_csv(summary, unknown);
    auto top = open_output(dir / "top_apps.csv");
    write_top_apps_csv(top, top_apps_report(samples));
    write_manifest(dir, "stats", c, inputs);
    return 0;
}

// --- intrude ---------------------------------------------------------------

int cmd_intrude(const ExperimentConfig& c, bool method_given) {
    const fs::path dir = c.out;
    Method method = Method::MsHmm;
    if (method_given) {
        if (c.methods.size() != 1) throw ConfigError("intrude takes exactly one --method");
        method = c.methods.front();
    }
    const Timestamp period = single_period(c);
    nlohmann::json inputs{{"period", period}, {"method", method_tag(method)}};
    const auto cohort = load_cohort(c, period, inputs);
    const auto models = train_models(cohort, method, c.model(), c.jobs);

    IntrusionOptions opt;
    opt.n_values = c.n_values;
    opt.segment = c.intrusion_segment;
    opt.seed = c.seed;
    opt.threshold = c.threshold;
    opt.genuine_percentile = c.genuine_percentile;
    opt.jobs = c.jobs;
    const auto report = run_intrusion_study(cohort, models, opt);
    auto curve = open_output(dir / "intrusion_curve.csv");
    write_intrusion_curve_csv(curve, report.curve);
    auto latency = open_output(dir / "latency.csv");
    write_latency_csv(latency, report.latency);
    write_manifest(dir, "intrude", c, inputs);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"App-usage continuous authentication toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", library_version());
    Flags f;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", f.config, "JSON experiment config")->check(CLI::ExistingFile);
        sub->add_option("--method", f.methods, "method tag(s): bin-unk, bin-unfore, med, mc, hmm-lap, mshmm")
            ->delimiter(',');
        sub->add_option("--n", f.n_values, "window length(s)")->delimiter(',');
        sub->add_option("--period", f.periods, "sampling period(s) in seconds")->delimiter(',');
        sub->add_option("--seed", f.seed, "master seed");
        sub->add_option("--out", f.out, "output directory");
        sub->add_option("--jobs", f.jobs, "worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--events", f.events, "event log CSV");
        sub->add_flag("-v,--verbose", f.verbose, "progress messages");
        sub->add_flag("-q,--quiet", f.quiet, "errors only");
    };

    auto* synth = app.add_subcommand("synth", "generate a synthetic cohort event log");
    auto* ingest = app.add_subcommand("ingest", "event log -> per-user observation sequences");
    auto* train = app.add_subcommand("train", "train per-user models from ingested sequences");
    auto* score = app.add_subcommand("score", "score test windows with saved models");
    auto* eval = app.add_subcommand("eval", "EER grid, ROC and metrics per method");
    auto* stats = app.add_subcommand("stats", "similarity, unknown-app and top-app reports");
    auto* intrude = app.add_subcommand("intrude", "intrusion curves and detection latency");
    for (auto* sub : {synth, ingest, train, score, eval, stats, intrude}) add_common(sub);
    train->add_option("--sequences", f.sequences, "directory of <user>_train.csv files");
    score->add_option("--sequences", f.sequences, "directory of <user>_test.csv files");
    score->add_option("--models", f.models, "model file or directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    log::set_level(f.quiet ? log::Level::Quiet : f.verbose ? log::Level::Info : log::Level::Warn);
    try {
        const auto config = resolve(f);
        if (synth->parsed()) return cmd_synth(config);
        if (ingest->parsed()) return cmd_ingest(config);
        if (train->parsed()) return cmd_train(config, f.sequences);
        if (score->parsed()) return cmd_score(config, f);
        if (eval->parsed()) return cmd_eval(config);
        if (stats->parsed()) return cmd_stats(config);
        if (intrude->parsed()) return cmd_intrude(config, !f.methods.empty());
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return 3;
    } catch (const UndefinedMetric& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
