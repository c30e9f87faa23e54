#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pmerge/align.hpp"
#include "pmerge/events.hpp"
#include "pmerge/tokens.hpp"

namespace pmerge {

constexpr double kGateDisabled = std::numeric_limits<double>::infinity();

struct MergeParams {
    std::size_t trim_t = 1;                  // trailing cascaded pieces dropped
    std::optional<std::size_t> window_m = 25; // nullopt: align everything
    std::size_t recent_k = 10;               // cascaded positions scored by the gate
    double rho_f_threshold = kGateDisabled;
    double rho_r_threshold = 0.5;

    // Throws std::invalid_argument on a zero window or negative/NaN threshold.
    void validate() const;
};

struct Composite {
    TokenSeq tokens;
    // Error rate over path steps touching the last recent_k cascaded tokens.
    double cost = 0.0;
    // C(m, n) / m of the aligned region.
    double rho_f = 0.0;
    AlignmentOutcome alignment;
};

// Keeps the first max(|x| - trim_t, 1) tokens of a non-empty sequence.
TokenSeq trim_cascaded(TokenSpan cascaded, std::size_t trim_t);

// Trims, aligns (windowed when params.window_m is set) and rebuilds the
// composite by walking the edit path, scoring the recent part of the path on
// the way.
Composite create_composite(TokenSpan causal, TokenSpan cascaded, const MergeParams &params);

// State carried across the partials of one utterance.
struct MergeState {
    TokenSeq latest_cascaded_partial;
    TokenSeq latest_partial_used_for_rewriting;

    bool operator==(const MergeState &) const = default;
};

enum class RewriteDecision {
    Passthrough, // no cascaded partial seen yet
    Accepted,    // composite with the latest cascaded partial
    Fallback,    // gate failed, rewrote with the last accepted cascaded partial
    Rejected,    // gate failed and nothing was ever accepted: causal text as is
};

struct RewriteOutcome {
    std::string text;
    RewriteDecision decision = RewriteDecision::Passthrough;
};

// Attempts a rewrite with the latest cascaded partial and falls back to the
// last accepted one when the gate rejects it. Both gates compare with `<`.
RewriteOutcome rewrite_result(std::string_view causal_text, MergeState &state,
                              const MergeParams &params,
                              const Tokenizer &tokenize = split_tokens);

// One step of the streaming loop. Cascaded partials update the state and are
// suppressed, causal partials are rewritten at their own timestamp, finals pass
// through untouched. A causal final throws InputError.
std::optional<ResultEvent> process_event(const ResultEvent &event, MergeState &state,
                                         const MergeParams &params,
                                         const Tokenizer &tokenize = split_tokens,
                                         RewriteDecision *decision = nullptr);

struct MergeStats {
    std::size_t accepted = 0;
    std::size_t fallback = 0;
    std::size_t rejected = 0;
    std::size_t passthrough = 0;
    // Wall time of each rewrite, microseconds.
    std::vector<double> rewrite_us;

    void record(RewriteDecision decision);
    MergeStats &operator+=(const MergeStats &other);

    double mean_rewrite_us() const;
    double p99_rewrite_us() const;
};

// Owns the state of one utterance and keeps rewrite statistics.
class MergeSession {
  public:
    explicit MergeSession(MergeParams params, Tokenizer tokenize = split_tokens);

    std::optional<ResultEvent> process(const ResultEvent &event);

    const MergeState &state() const { return state_; }
    const MergeStats &stats() const { return stats_; }

  private:
    MergeParams params_;
    Tokenizer tokenize_;
    MergeState state_;
    MergeStats stats_;
};

// Batch driver over one utterance. Rejects input that is not ordered by
// (time_ms, origin, kind) with InputError.
std::vector<ResultEvent> merge_stream(const std::vector<ResultEvent> &events,
                                      const MergeParams &params,
                                      MergeStats *stats = nullptr);

} // namespace pmerge
