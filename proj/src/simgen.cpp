#include "pmerge/simgen.hpp"

#include <algorithm>
#include <iterator>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string_view>

namespace pmerge::sim {

namespace {

constexpr std::string_view kVocabulary[] = {
    "the",      "of",        "and",      "to",        "in",       "is",        "you",
    "that",     "it",        "he",       "was",       "for",      "on",        "are",
    "as",       "with",      "his",      "they",      "at",       "be",        "this",
    "have",     "from",      "one",      "had",       "by",       "word",      "but",
    "not",      "what",      "all",      "were",      "we",       "when",      "your",
    "can",      "said",      "there",    "use",       "each",     "which",     "she",
    "how",      "their",     "will",     "other",     "about",    "out",       "many",
    "then",     "them",      "these",    "some",      "her",      "would",     "make",
    "like",     "him",       "into",     "time",      "has",      "look",      "two",
    "more",     "write",     "go",       "see",       "number",   "way",       "could",
    "people",   "my",        "than",     "first",     "water",    "been",      "call",
    "who",      "now",       "find",     "long",      "down",     "day",       "did",
    "get",      "come",      "made",     "may",       "part",     "over",      "new",
    "sound",    "take",      "only",     "little",    "work",     "know",      "place",
    "year",     "live",      "back",     "give",      "most",     "very",      "after",
    "thing",    "just",      "name",     "good",      "sentence", "man",       "think",
    "say",      "great",     "where",    "help",      "through",  "much",      "before",
    "line",     "right",     "too",      "mean",      "old",      "any",       "same",
    "tell",     "boy",       "follow",   "came",      "want",     "show",      "also",
    "around",   "form",      "three",    "small",     "set",      "put",       "end",
    "does",     "another",   "well",     "large",     "must",     "big",       "even",
    "such",     "because",   "turn",     "here",      "why",      "ask",       "went",
    "rosalie",  "weather",   "tomorrow", "reminder",  "calendar", "navigate",  "message",
    "restaurant", "appointment", "temperature", "directions", "playlist", "alarm", "morning",
    "evening",  "kitchen",
};

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t draw(std::uint64_t seed, std::uint64_t stream, std::uint64_t index,
                   std::uint64_t purpose) {
    return mix64(mix64(mix64(mix64(seed) ^ stream) ^ index) ^ purpose);
}

enum Purpose : std::uint64_t {
    kErrorGate = 1,
    kErrorType,
    kPerturb,
    kInsertWord,
    kJitter,
    kTransientGate,
    kTransientPerturb,
};

enum class Corruption { None, Substitute, Remove, Insert };

Corruption sample_corruption(const SimConfig &c, Stream stream, std::size_t index) {
    const auto s = static_cast<std::uint64_t>(stream);
    const double rate = stream == Stream::Causal ? c.causal_error_rate : c.cascaded_error_rate;
    if (uniform(c.seed, s, index, kErrorGate) >= rate) return Corruption::None;
    const double u = uniform(c.seed, s, index, kErrorType);
    if (u < c.error_mix.substitute) return Corruption::Substitute;
    if (u < c.error_mix.substitute + c.error_mix.remove) return Corruption::Remove;
    return Corruption::Insert;
}

// Word pieces a stream produces for each reference word.
std::vector<TokenSeq> hypothesis_pieces(const TokenSeq &reference, const SimConfig &c,
                                        Stream stream) {
    const auto s = static_cast<std::uint64_t>(stream);
    std::vector<TokenSeq> out(reference.size());
    for (std::size_t i = 0; i < reference.size(); ++i) {
        switch (sample_corruption(c, stream, i)) {
        case Corruption::None: out[i] = pieces_from_word(reference[i]); break;
        case Corruption::Substitute:
            out[i] = pieces_from_word(perturb_word(reference[i], draw(c.seed, s, i, kPerturb)));
            break;
        case Corruption::Remove: break;
        case Corruption::Insert: {
            out[i] = pieces_from_word(reference[i]);
            const auto pick = draw(c.seed, s, i, kInsertWord) % std::size(kVocabulary);
            auto extra = pieces_from_word(kVocabulary[pick]);
            out[i].insert(out[i].end(), extra.begin(), extra.end());
            break;
        }
        }
    }
    return out;
}

// Text of a partial showing the first `count` words; in non-monotone mode the
// newest word may be replaced by a transient misrecognition.
std::string partial_text(const std::vector<TokenSeq> &pieces, const TokenSeq &reference,
                         std::size_t count, const SimConfig &c, Stream stream) {
    TokenSeq tokens;
    for (std::size_t i = 0; i + 1 < count; ++i) {
        tokens.insert(tokens.end(), pieces[i].begin(), pieces[i].end());
    }
    const std::size_t last = count - 1;
    const auto s = static_cast<std::uint64_t>(stream);
    const double rate = stream == Stream::Causal ? c.causal_error_rate : c.cascaded_error_rate;
    if (!c.monotone && uniform(c.seed, s, last, kTransientGate) < rate) {
        auto wrong = pieces_from_word(
            perturb_word(reference[last], draw(c.seed, s, last, kTransientPerturb)));
        tokens.insert(tokens.end(), wrong.begin(), wrong.end());
    } else {
        tokens.insert(tokens.end(), pieces[last].begin(), pieces[last].end());
    }
    return join_tokens(tokens);
}

std::string flatten(const std::vector<TokenSeq> &pieces) {
    TokenSeq all;
    for (const auto &p : pieces) all.insert(all.end(), p.begin(), p.end());
    return join_tokens(all);
}

} // namespace

void SimConfig::validate() const {
    auto probability = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (causal_word_interval_ms <= 0) throw std::invalid_argument("word interval must be > 0");
    if (causal_jitter_ms < 0 || cascaded_delay_ms < 0) {
        throw std::invalid_argument("jitter and delay must be >= 0");
    }
    if (!probability(causal_error_rate) || !probability(cascaded_error_rate)) {
        throw std::invalid_argument("error rates must lie in [0, 1]");
    }
    const ErrorMix &m = error_mix;
    if (!probability(m.substitute) || !probability(m.remove) || !probability(m.insert) ||
        std::abs(m.substitute + m.remove + m.insert - 1.0) > 1e-9) {
        throw std::invalid_argument("error mix must be probabilities summing to 1");
    }
}

double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index,
               std::uint64_t purpose) {
    return static_cast<double>(draw(seed, stream, index, purpose) >> 11) * 0x1.0p-53;
}

std::string perturb_word(const std::string &word, std::uint64_t h) {
    if (word.empty()) return "x";
    std::string out = word;
    const std::size_t pos = h % out.size();
    char c = static_cast<char>('a' + (h >> 16) % 26);
    if (c == out[pos]) c = c == 'z' ? 'a' : static_cast<char>(c + 1);
    out[pos] = c;
    return out;
}

SimulatedStreams generate_streams(const TokenSeq &reference, const SimConfig &config) {
    config.validate();
    if (reference.empty()) throw std::invalid_argument("generate_streams: empty reference");

    const std::vector<TokenSeq> causal = hypothesis_pieces(reference, config, Stream::Causal);
    const std::vector<TokenSeq> cascaded = hypothesis_pieces(reference, config, Stream::Cascaded);
    const std::int64_t interval = config.causal_word_interval_ms;
    const std::size_t n = reference.size();

    SimulatedStreams out;
    out.causal_hypothesis = flatten(causal);
    out.cascaded_hypothesis = flatten(cascaded);

    std::string previous;
    std::int64_t previous_time = 0;
    for (std::size_t k = 1; k <= n; ++k) {
        std::int64_t t = static_cast<std::int64_t>(k) * interval;
        if (config.causal_jitter_ms > 0) {
            const double u = uniform(config.seed, static_cast<std::uint64_t>(Stream::Causal), k,
                                     kJitter);
            t += static_cast<std::int64_t>(
                std::floor((2.0 * u - 1.0) * static_cast<double>(config.causal_jitter_ms) + 0.5));
        }
        t = std::max(t, previous_time);
        std::string text = partial_text(causal, reference, k, config, Stream::Causal);
        if (text == previous) continue;
        out.events.push_back({t, Origin::Causal, Kind::Partial, text});
        previous = std::move(text);
        previous_time = t;
    }

    previous.clear();
    for (std::size_t k = 1; k < n; ++k) {
        const std::int64_t t = static_cast<std::int64_t>(k) * interval + config.cascaded_delay_ms;
        std::string text = partial_text(cascaded, reference, k, config, Stream::Cascaded);
        if (text == previous) continue;
        out.events.push_back({t, Origin::Cascaded, Kind::Partial, text});
        previous = std::move(text);
    }
    const std::int64_t end_time = static_cast<std::int64_t>(n) * interval + config.cascaded_delay_ms;
    out.events.push_back(
        {std::max(end_time, previous_time), Origin::Cascaded, Kind::Final, out.cascaded_hypothesis});

    std::stable_sort(out.events.begin(), out.events.end(),
                     [](const ResultEvent &a, const ResultEvent &b) {
                         return order_key(a) < order_key(b);
                     });
    return out;
}

std::vector<UtteranceLog> generate_corpus(const std::vector<ReferenceLine> &references,
                                          const SimConfig &config) {
    std::vector<UtteranceLog> logs;
    logs.reserve(references.size());
    for (std::size_t u = 0; u < references.size(); ++u) {
        SimConfig local = config;
        local.seed = mix64(config.seed ^ mix64(u));
        auto streams = generate_streams(references[u].words, local);
        logs.push_back({references[u].utterance_id, references[u].words, std::move(streams.events)});
    }
    return logs;
}

std::vector<ReferenceLine> synthetic_references(std::size_t count, std::size_t min_words,
                                                std::size_t max_words, std::uint64_t seed) {
    if (min_words == 0 || max_words < min_words) {
        throw std::invalid_argument("synthetic_references: need 1 <= min_words <= max_words");
    }
    constexpr std::uint64_t kCorpusStream = 7;
    std::vector<ReferenceLine> out;
    out.reserve(count);
    for (std::size_t u = 0; u < count; ++u) {
        const std::uint64_t useed = mix64(seed ^ mix64(u + 1));
        const std::size_t span = max_words - min_words + 1;
        const std::size_t length = min_words + draw(useed, kCorpusStream, 0, 0) % span;
        ReferenceLine line;
        char id[32];
        std::snprintf(id, sizeof id, "utt%04zu", u + 1);
        line.utterance_id = id;
        for (std::size_t w = 0; w < length; ++w) {
            line.words.emplace_back(kVocabulary[draw(useed, kCorpusStream, w + 1, 1) % std::size(kVocabulary)]);
        }
        out.push_back(std::move(line));
    }
    return out;
}

} // namespace pmerge::sim
