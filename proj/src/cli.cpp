#include "pmerge/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "pmerge/errors.hpp"
#include "pmerge/logio.hpp"
#include "pmerge/pipeline.hpp"
#include "pmerge/simgen.hpp"

namespace pmerge::cli {

namespace {

using nlohmann::ordered_json;

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

bool is_inf(const std::string &text) {
    std::string lower = text;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return lower == "inf" || lower == "infinity" || lower == "none" || lower == "unlimited";
}

double parse_threshold(const std::string &text, const std::string &flag) {
    if (is_inf(text)) return kGateDisabled;
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size() || std::isnan(v) || v < 0.0) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception &) {
        throw UsageError(flag + ": expected a non-negative number or 'inf', got '" + text + "'");
    }
}

std::size_t parse_count(const std::string &text, const std::string &flag) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(text, &used);
        if (used != text.size() || v < 0) throw std::invalid_argument(text);
        return static_cast<std::size_t>(v);
    } catch (const std::exception &) {
        throw UsageError(flag + ": expected a non-negative integer, got '" + text + "'");
    }
}

std::optional<std::size_t> parse_window(const std::string &text, const std::string &flag) {
    if (is_inf(text)) return std::nullopt;
    const std::size_t m = parse_count(text, flag);
    if (m == 0) throw UsageError(flag + ": window must be >= 1 or 'inf'");
    return m;
}

// Merge flags as raw strings so "inf" is accepted everywhere it makes sense.
struct MergeFlags {
    std::string trim_t = "1";
    std::string window_m = "25";
    std::string recent_k = "10";
    std::string rho_r = "0.5";
    std::string rho_f = "inf";

    void attach(CLI::App &app) {
        app.add_option("--trim-t", trim_t, "Trailing cascaded word pieces to drop")
            ->capture_default_str();
        app.add_option("--window-m", window_m, "Alignment window M, or 'inf'")
            ->capture_default_str();
        app.add_option("--recent-k", recent_k, "Cascaded positions scored by the cost gate")
            ->capture_default_str();
        app.add_option("--rho-r", rho_r, "Recent-cost threshold, or 'inf'")->capture_default_str();
        app.add_option("--rho-f", rho_f, "Full-cost threshold, or 'inf'")->capture_default_str();
    }

    MergeParams params() const {
        MergeParams p;
        p.trim_t = parse_count(trim_t, "--trim-t");
        p.window_m = parse_window(window_m, "--window-m");
        p.recent_k = parse_count(recent_k, "--recent-k");
        p.rho_r_threshold = parse_threshold(rho_r, "--rho-r");
        p.rho_f_threshold = parse_threshold(rho_f, "--rho-f");
        return p;
    }
};

std::string fixed(double v, int digits = 6) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

ordered_json optional_number(std::optional<double> v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

// ---------------------------------------------------------------- merge

int cmd_merge(const std::string &in_path, const std::string &out_path, const MergeFlags &flags,
              std::ostream &out) {
    const MergeParams params = flags.params();
    const auto logs = read_log(in_path);
    const CorpusMerge merged = merge_corpus(logs, params);
    write_log(merged.logs, out_path);

    out << "utterance_id\taccepted\trejected\tfallback\tpassthrough\n";
    for (std::size_t u = 0; u < merged.logs.size(); ++u) {
        const MergeStats &s = merged.per_utterance[u];
        out << merged.logs[u].utterance_id << '\t' << s.accepted << '\t' << s.rejected << '\t'
            << s.fallback << '\t' << s.passthrough << '\n';
    }
    const MergeStats &t = merged.total;
    out << "total\t" << t.accepted << '\t' << t.rejected << '\t' << t.fallback << '\t'
        << t.passthrough << '\n';
    out << "rewrites " << t.rewrite_us.size() << ", mean " << fixed(t.mean_rewrite_us(), 2)
        << " us, p99 " << fixed(t.p99_rewrite_us(), 2) << " us\n";
    return kOk;
}

// ---------------------------------------------------------------- metrics

ordered_json report_record(const std::string &id, const metrics::MetricsReport &r) {
    ordered_json j;
    j["utterance_id"] = id;
    const nlohmann::json fields = metrics::to_json(r);
    for (const auto &[key, value] : fields.items()) j[key] = value;
    return j;
}

int cmd_metrics(const std::string &log_path, const std::string &baseline_path,
                const std::string &out_path, std::ostream &out) {
    const auto logs = read_log(log_path);
    const CorpusMetrics scored = evaluate_corpus(logs);

    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path, std::ios::trunc);
        if (!file) throw std::runtime_error("cannot open '" + out_path + "' for writing");
    }
    std::ostream &sink = out_path.empty() ? out : file;

    for (const auto &[id, report] : scored.per_utterance) sink << report_record(id, report).dump() << '\n';
    sink << report_record("*corpus*", scored.corpus).dump() << '\n';

    int status = kOk;
    if (!baseline_path.empty()) {
        const auto baseline_logs = read_log(baseline_path);
        const CorpusMetrics base = evaluate_corpus(baseline_logs);
        const BaselineCheck check = compare_with_baseline(logs, baseline_logs);
        const auto &a = scored.corpus;
        const auto &b = base.corpus;

        ordered_json delta;
        delta["utterance_id"] = "*delta*";
        delta["pwer_pct"] = optional_number(delta_percent(a.pwer.value(), b.pwer.value()));
        delta["upwr_partials_pct"] =
            optional_number(delta_percent(a.upwr_partials.value(), b.upwr_partials.value()));
        delta["upwr_transition_pct"] =
            optional_number(delta_percent(a.upwr_transition.value(), b.upwr_transition.value()));
        delta["upwr_all_pct"] =
            optional_number(delta_percent(a.upwr_all.value(), b.upwr_all.value()));
        delta["final_wer_pct"] =
            optional_number(delta_percent(a.final_wer.value(), b.final_wer.value()));
        const auto pl = a.latency.mean();
        const auto pl_base = b.latency.mean();
        delta["delta_pl_ms"] = pl && pl_base ? ordered_json(*pl - *pl_base) : ordered_json(nullptr);
        delta["finals_identical"] = check.finals_identical;
        delta["timestamps_identical"] = check.timestamps_identical;
        delta["mismatched_finals"] = check.mismatched_finals;
        delta["mismatched_timestamps"] = check.mismatched_timestamps;
        sink << delta.dump() << '\n';
        if (!check.finals_identical) status = kFinalsChanged;
    }
    if (!out_path.empty()) {
        const auto &c = scored.corpus;
        out << "utterances " << scored.per_utterance.size() << ", pwer " << fixed(c.pwer.value())
            << ", upwr partials/transition/all " << fixed(c.upwr_partials.value()) << '/'
            << fixed(c.upwr_transition.value()) << '/' << fixed(c.upwr_all.value())
            << ", final wer " << fixed(c.final_wer.value()) << '\n';
    }
    if (status == kFinalsChanged) {
        out << "FAILED: final results differ from the baseline\n";
    }
    return status;
}

// ---------------------------------------------------------------- simulate

struct SimFlags {
    std::string references;
    std::size_t synthetic = 0;
    std::size_t min_words = 20;
    std::size_t max_words = 60;
    sim::SimConfig config;
    bool non_monotone = false;

    void attach(CLI::App &app) {
        auto *refs = app.add_option("--references", references,
                                    "Transcripts, one per line ('id<TAB>words' or words)");
        auto *syn = app.add_option("--synthetic", synthetic,
                                   "Generate this many transcripts from the built-in vocabulary");
        refs->excludes(syn);
        app.add_option("--min-words", min_words)->capture_default_str();
        app.add_option("--max-words", max_words)->capture_default_str();
        app.add_option("--seed", config.seed)->capture_default_str();
        app.add_option("--interval-ms", config.causal_word_interval_ms)->capture_default_str();
        app.add_option("--jitter-ms", config.causal_jitter_ms)->capture_default_str();
        app.add_option("--delay-ms", config.cascaded_delay_ms)->capture_default_str();
        app.add_option("--causal-error-rate", config.causal_error_rate)->capture_default_str();
        app.add_option("--cascaded-error-rate", config.cascaded_error_rate)
            ->capture_default_str();
        app.add_option("--mix-substitute", config.error_mix.substitute)->capture_default_str();
        app.add_option("--mix-delete", config.error_mix.remove)->capture_default_str();
        app.add_option("--mix-insert", config.error_mix.insert)->capture_default_str();
        app.add_flag("--non-monotone", non_monotone,
                     "Let the newest word of a partial flicker before it settles");
    }
};

int cmd_simulate(SimFlags flags, const std::string &out_path, std::ostream &out) {
    flags.config.monotone = !flags.non_monotone;
    try {
        flags.config.validate();
    } catch (const std::invalid_argument &e) {
        throw UsageError(e.what());
    }
    std::vector<ReferenceLine> refs;
    if (!flags.references.empty()) {
        refs = read_references(flags.references);
    } else if (flags.synthetic > 0) {
        if (flags.min_words == 0 || flags.max_words < flags.min_words) {
            throw UsageError("need 1 <= --min-words <= --max-words");
        }
        refs = sim::synthetic_references(flags.synthetic, flags.min_words, flags.max_words,
                                         flags.config.seed);
    } else {
        throw UsageError("one of --references or --synthetic is required");
    }
    const auto logs = sim::generate_corpus(refs, flags.config);
    write_log(logs, out_path);
    std::size_t events = 0;
    for (const auto &l : logs) events += l.events.size();
    out << "wrote " << logs.size() << " utterances, " << events << " events to " << out_path
        << '\n';
    return kOk;
}

// ---------------------------------------------------------------- sweep

enum class SweepParam { TrimT, RhoR, RecentK, WindowM };

SweepParam parse_sweep_param(const std::string &name) {
    if (name == "T" || name == "trim_t") return SweepParam::TrimT;
    if (name == "rho_r") return SweepParam::RhoR;
    if (name == "K" || name == "recent_k") return SweepParam::RecentK;
    if (name == "M" || name == "window_m") return SweepParam::WindowM;
    throw UsageError("--param must be one of T, rho_r, K, M (got '" + name + "')");
}

MergeParams with_value(MergeParams base, SweepParam param, const std::string &value) {
    switch (param) {
    case SweepParam::TrimT: base.trim_t = parse_count(value, "--values"); break;
    case SweepParam::RhoR: base.rho_r_threshold = parse_threshold(value, "--values"); break;
    case SweepParam::RecentK: base.recent_k = parse_count(value, "--values"); break;
    case SweepParam::WindowM: base.window_m = parse_window(value, "--values"); break;
    }
    return base;
}

int cmd_sweep(const std::string &log_path, const std::string &param_name,
              const std::vector<std::string> &values, const std::string &out_path,
              const MergeFlags &flags, std::ostream &out) {
    if (values.empty()) throw UsageError("--values must list at least one value");
    const SweepParam param = parse_sweep_param(param_name);
    const MergeParams base = flags.params();
    std::vector<MergeParams> grid;
    for (const auto &v : values) grid.push_back(with_value(base, param, v));

    const auto logs = read_log(log_path);
    const CorpusMetrics causal = evaluate_corpus(logs);
    const auto causal_pl = causal.corpus.latency.mean();

    std::ofstream csv(out_path, std::ios::trunc);
    if (!csv) throw std::runtime_error("cannot open '" + out_path + "' for writing");
    csv << "param_value,pwer,upwr_partials,upwr_transition,upwr_all,delta_pl_ms,final_wer\n";
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const CorpusMetrics scored = evaluate_corpus(merge_corpus(logs, grid[k]).logs);
        const auto &c = scored.corpus;
        const auto pl = c.latency.mean();
        csv << values[k] << ',' << fixed(c.pwer.value()) << ',' << fixed(c.upwr_partials.value())
            << ',' << fixed(c.upwr_transition.value()) << ',' << fixed(c.upwr_all.value()) << ','
            << (pl && causal_pl ? fixed(*pl - *causal_pl, 3) : std::string()) << ','
            << fixed(c.final_wer.value()) << '\n';
    }
    out << "wrote " << grid.size() << " rows to " << out_path << '\n';
    return kOk;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Merge causal and cascaded streaming-ASR partial results", "pmerge"};
    app.require_subcommand(1);

    std::string in_path, out_path, baseline_path, param_name;
    std::vector<std::string> values;
    MergeFlags merge_flags;
    MergeFlags sweep_flags;
    SimFlags sim_flags;

    auto *merge = app.add_subcommand("merge", "Rewrite causal partials with cascaded context");
    merge->add_option("log", in_path, "Input event log")->required();
    merge->add_option("--out", out_path, "Merged event log")->required();
    merge_flags.attach(*merge);

    auto *score = app.add_subcommand("metrics", "Score the visible stream against references");
    score->add_option("log", in_path, "Event log with references")->required();
    score->add_option("--baseline", baseline_path, "Log to compare against (e.g. the input)");
    score->add_option("--out", out_path, "Write the JSONL report here instead of stdout");

    auto *simulate = app.add_subcommand("simulate", "Generate causal/cascaded event logs");
    simulate->add_option("--out", out_path, "Event log to write")->required();
    sim_flags.attach(*simulate);

    auto *sweep = app.add_subcommand("sweep", "Merge and score over a grid of one parameter");
    sweep->add_option("log", in_path, "Event log with references")->required();
    sweep->add_option("--param", param_name, "T, rho_r, K or M")->required();
    sweep->add_option("--values", values, "Comma-separated grid")->delimiter(',')->required();
    sweep->add_option("--out", out_path, "CSV to write")->required();
    sweep_flags.attach(*sweep);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        if (*merge) return cmd_merge(in_path, out_path, merge_flags, out);
        if (*score) return cmd_metrics(in_path, baseline_path, out_path, out);
        if (*simulate) return cmd_simulate(sim_flags, out_path, out);
        if (*sweep) return cmd_sweep(in_path, param_name, values, out_path, sweep_flags, out);
    } catch (const UsageError &e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const InputError &e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    }
    return kUsage;
}

} // namespace pmerge::cli
