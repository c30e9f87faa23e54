#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pmerge/logio.hpp"
#include "pmerge/merge.hpp"
#include "pmerge/metrics.hpp"

// Corpus-level drivers shared by the command line tools and the tests.
namespace pmerge {

struct CorpusMerge {
    std::vector<UtteranceLog> logs;
    std::vector<MergeStats> per_utterance;
    MergeStats total;
};

// Merges every utterance independently; references are carried over.
CorpusMerge merge_corpus(const std::vector<UtteranceLog> &logs, const MergeParams &params);

struct CorpusMetrics {
    std::vector<std::pair<std::string, metrics::MetricsReport>> per_utterance;
    metrics::MetricsReport corpus;
};

// Throws InputError naming every utterance without a reference.
CorpusMetrics evaluate_corpus(const std::vector<UtteranceLog> &logs);

struct BaselineCheck {
    bool finals_identical = true;
    bool timestamps_identical = true; // multiset of partial timestamps
    std::vector<std::string> mismatched_finals;
    std::vector<std::string> mismatched_timestamps;
};

// Compares a (merged) log with the log it was derived from, utterance by
// utterance. Throws InputError when the utterance sets differ.
BaselineCheck compare_with_baseline(const std::vector<UtteranceLog> &logs,
                                    const std::vector<UtteranceLog> &baseline);

// Relative change in percent; nullopt when the baseline is 0 and the value is not.
std::optional<double> delta_percent(double value, double baseline);

} // namespace pmerge
