#include "pmerge/pipeline.hpp"

#include <algorithm>
#include <map>

#include "pmerge/errors.hpp"

namespace pmerge {

namespace {

std::vector<std::int64_t> partial_times(const UtteranceLog &log) {
    std::vector<std::int64_t> times;
    for (const auto &e : log.events) {
        if (e.kind == Kind::Partial && e.origin == Origin::Causal) times.push_back(e.time_ms);
    }
    std::sort(times.begin(), times.end());
    return times;
}

std::optional<std::string> final_text(const UtteranceLog &log) {
    for (const auto &e : log.events) {
        if (e.kind == Kind::Final) return e.text;
    }
    return std::nullopt;
}

} // namespace

CorpusMerge merge_corpus(const std::vector<UtteranceLog> &logs, const MergeParams &params) {
    params.validate();
    CorpusMerge out;
    out.logs.reserve(logs.size());
    out.per_utterance.reserve(logs.size());
    for (const auto &log : logs) {
        MergeStats stats;
        std::vector<ResultEvent> merged;
        try {
            merged = merge_stream(log.events, params, &stats);
        } catch (const InputError &e) {
            throw InputError("utterance '" + log.utterance_id + "': " + e.what());
        }
        out.logs.push_back({log.utterance_id, log.reference, std::move(merged)});
        out.total += stats;
        out.per_utterance.push_back(std::move(stats));
    }
    return out;
}

CorpusMetrics evaluate_corpus(const std::vector<UtteranceLog> &logs) {
    std::vector<std::string> missing;
    for (const auto &log : logs) {
        if (!log.reference || log.reference->empty()) missing.push_back(log.utterance_id);
    }
    if (!missing.empty()) {
        std::string list;
        for (const auto &id : missing) list += (list.empty() ? "" : ", ") + id;
        throw InputError("missing reference for utterance(s): " + list);
    }
    CorpusMetrics out;
    for (const auto &log : logs) {
        auto report = metrics::evaluate_stream(log.events, *log.reference);
        out.corpus += report;
        out.per_utterance.emplace_back(log.utterance_id, report);
    }
    return out;
}

BaselineCheck compare_with_baseline(const std::vector<UtteranceLog> &logs,
                                    const std::vector<UtteranceLog> &baseline) {
    std::map<std::string, const UtteranceLog *> by_id;
    for (const auto &b : baseline) by_id[b.utterance_id] = &b;
    if (by_id.size() != logs.size()) {
        throw InputError("baseline has " + std::to_string(baseline.size()) +
                         " utterances, log has " + std::to_string(logs.size()));
    }
    BaselineCheck out;
    for (const auto &log : logs) {
        auto it = by_id.find(log.utterance_id);
        if (it == by_id.end()) {
            throw InputError("utterance '" + log.utterance_id + "' missing from baseline");
        }
        if (final_text(log) != final_text(*it->second)) {
            out.finals_identical = false;
            out.mismatched_finals.push_back(log.utterance_id);
        }
        if (partial_times(log) != partial_times(*it->second)) {
            out.timestamps_identical = false;
            out.mismatched_timestamps.push_back(log.utterance_id);
        }
    }
    return out;
}

std::optional<double> delta_percent(double value, double baseline) {
    if (baseline == 0.0) {
        if (value == 0.0) return 0.0;
        return std::nullopt;
    }
    return (value - baseline) / baseline * 100.0;
}

} // namespace pmerge
