#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pmerge/events.hpp"
#include "pmerge/logio.hpp"
#include "pmerge/tokens.hpp"

namespace pmerge::sim {

struct ErrorMix {
    double substitute = 0.6;
    double remove = 0.2;
    double insert = 0.2;
};

struct SimConfig {
    std::int64_t causal_word_interval_ms = 300;
    std::int64_t causal_jitter_ms = 0;
    std::int64_t cascaded_delay_ms = 900;
    double causal_error_rate = 0.08;
    double cascaded_error_rate = 0.02;
    ErrorMix error_mix;
    // Each stream's own partials only ever grow. When false, the newest word
    // of a partial is sometimes shown wrong and fixed in the next partial.
    bool monotone = true;
    std::uint64_t seed = 1;

    // Throws std::invalid_argument on out-of-range knobs.
    void validate() const;
};

enum class Stream : std::uint64_t { Causal = 1, Cascaded = 2 };

// Uniform in [0, 1), a pure function of its arguments.
double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index,
               std::uint64_t purpose);

// Deterministic one-letter change; the result always differs from `word`.
std::string perturb_word(const std::string &word, std::uint64_t draw);

struct SimulatedStreams {
    std::vector<ResultEvent> events; // ordered by (time_ms, origin, kind)
    std::string causal_hypothesis;   // word pieces
    std::string cascaded_hypothesis; // word pieces, also the FINAL text
};

// Causal partial k shows the first k (corrupted) words at about k * interval;
// cascaded partial k shows its own first k words once the k-th word ended
// cascaded_delay_ms ago; the FINAL carries the full cascaded hypothesis.
// Throws std::invalid_argument on an empty reference.
SimulatedStreams generate_streams(const TokenSeq &reference, const SimConfig &config);

// Per-utterance seeds are derived from config.seed and the utterance index.
std::vector<UtteranceLog> generate_corpus(const std::vector<ReferenceLine> &references,
                                          const SimConfig &config);

// Reference transcripts drawn from a fixed built-in vocabulary.
std::vector<ReferenceLine> synthetic_references(std::size_t count, std::size_t min_words,
                                                std::size_t max_words, std::uint64_t seed);

} // namespace pmerge::sim
