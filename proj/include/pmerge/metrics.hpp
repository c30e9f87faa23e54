#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "json.hpp"

#include "pmerge/events.hpp"
#include "pmerge/tokens.hpp"

// Scoring of partial-result streams against a reference. Everything here
// works on whole words; callers convert word pieces with words_from_text.
namespace pmerge::metrics {

struct Ratio {
    std::uint64_t numerator = 0;
    std::uint64_t denominator = 0;

    // 0 when the denominator is 0.
    double value() const {
        return denominator ? static_cast<double>(numerator) / static_cast<double>(denominator)
                           : 0.0;
    }
    Ratio &operator+=(const Ratio &o) {
        numerator += o.numerator;
        denominator += o.denominator;
        return *this;
    }
    bool operator==(const Ratio &) const = default;
};

struct PrefixMatch {
    std::size_t errors = 0;
    std::size_t matched_ref_len = 0;
    bool operator==(const PrefixMatch &) const = default;
};

// Edit distance of the partial against its best-matching reference prefix;
// ties resolve to the longest prefix.
PrefixMatch partial_prefix_errors(TokenSpan partial, TokenSpan reference);

// Micro-averaged: total prefix errors over total matched reference words.
Ratio pwer(const std::vector<TokenSeq> &partials, TokenSpan reference);

struct TimedWords {
    std::int64_t time_ms = 0;
    TokenSeq words;
};

struct LatencyTotal {
    std::int64_t sum_ms = 0;
    std::uint64_t words = 0;

    std::optional<double> mean() const {
        if (!words) return std::nullopt;
        return static_cast<double>(sum_ms) / static_cast<double>(words);
    }
    LatencyTotal &operator+=(const LatencyTotal &o) {
        sum_ms += o.sum_ms;
        words += o.words;
        return *this;
    }
};

// Mean stabilised appearance time of the reference words that are correct in
// the last partial. A word's time is that of the earliest partial from which
// on it stays correctly aligned. `words == 0` for an empty stream.
LatencyTotal partial_latency(const std::vector<TimedWords> &stream, TokenSpan reference);

// Words of each result not kept as a common prefix by the next result, over
// all words of every result but the last.
Ratio upwr(const std::vector<TokenSeq> &results);

struct UpwrThreeWay {
    Ratio partials;   // the N partials
    Ratio transition; // last partial -> final
    Ratio all;        // partials followed by the final
};

// Without a final, transition is empty and all == partials.
UpwrThreeWay upwr_three_way(const std::vector<TokenSeq> &partials,
                            const std::optional<TokenSeq> &final_result);

// Word edit distance over reference length. Throws std::invalid_argument on an
// empty reference.
Ratio wer(TokenSpan hypothesis, TokenSpan reference);

struct MetricsReport {
    Ratio pwer;
    LatencyTotal latency;
    Ratio upwr_partials;
    Ratio upwr_transition;
    Ratio upwr_all;
    Ratio final_wer;
    std::uint64_t partial_count = 0;
    std::uint64_t final_count = 0;

    MetricsReport &operator+=(const MetricsReport &o);
};

// Scores the user-visible stream of one utterance: causal-origin partials and
// the final. Cascaded partials are ignored.
MetricsReport evaluate_stream(const std::vector<ResultEvent> &events, TokenSpan reference);

nlohmann::json to_json(const MetricsReport &report);

} // namespace pmerge::metrics
