#include "pmerge/merge.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pmerge/errors.hpp"

namespace pmerge {

void MergeParams::validate() const {
    if (window_m && *window_m == 0) throw std::invalid_argument("window M must be >= 1");
    for (double threshold : {rho_f_threshold, rho_r_threshold}) {
        if (std::isnan(threshold) || threshold < 0.0) {
            throw std::invalid_argument("cost thresholds must be >= 0");
        }
    }
}

TokenSeq trim_cascaded(TokenSpan cascaded, std::size_t trim_t) {
    if (cascaded.empty()) return {};
    const std::size_t keep = cascaded.size() > trim_t + 1 ? cascaded.size() - trim_t : 1;
    return TokenSeq(cascaded.begin(), cascaded.begin() + static_cast<std::ptrdiff_t>(keep));
}

Composite create_composite(TokenSpan causal, TokenSpan cascaded, const MergeParams &params) {
    const TokenSeq x = trim_cascaded(cascaded, params.trim_t);
    const TokenSpan y = causal;
    const std::size_t m = x.size();

    Composite out;
    out.alignment = params.window_m ? windowed_align(x, y, *params.window_m) : lev_align(x, y);
    const std::size_t p = out.alignment.window_offset;
    out.rho_f = cost_full(out.alignment, m - p);

    out.tokens.reserve(m + y.size());
    out.tokens.insert(out.tokens.end(), x.begin(), x.begin() + static_cast<std::ptrdiff_t>(p));

    // Positions are 0-based here; the cascaded token at index j is "recent"
    // when j + 1 > m - K.
    std::size_t i = p; // causal
    std::size_t j = p; // cascaded
    std::size_t errors = 0;
    std::size_t counted = 0;
    auto recent = [&] { return j + 1 + params.recent_k > m; };
    for (EditOp op : out.alignment.path) {
        switch (op) {
        case EditOp::Correct:
        case EditOp::Substitute:
            out.tokens.push_back(x[j]);
            if (recent()) {
                if (op == EditOp::Substitute) ++errors;
                ++counted;
            }
            ++i, ++j;
            break;
        case EditOp::Insert:
            out.tokens.push_back(x[j]);
            if (recent()) ++errors, ++counted;
            ++j;
            break;
        case EditOp::Delete:
            if (recent()) ++errors, ++counted;
            ++i;
            break;
        }
    }
    out.tokens.insert(out.tokens.end(), y.begin() + static_cast<std::ptrdiff_t>(i), y.end());
    out.cost = counted ? static_cast<double>(errors) / static_cast<double>(counted) : 0.0;
    return out;
}

RewriteOutcome rewrite_result(std::string_view causal_text, MergeState &state,
                              const MergeParams &params, const Tokenizer &tokenize) {
    const TokenSeq causal = tokenize(causal_text);
    const Composite attempt = create_composite(causal, state.latest_cascaded_partial, params);
    const bool accept =
        attempt.cost < params.rho_r_threshold && attempt.rho_f < params.rho_f_threshold;

    if (accept) {
        state.latest_partial_used_for_rewriting = state.latest_cascaded_partial;
        if (state.latest_cascaded_partial.empty()) {
            return {std::string(causal_text), RewriteDecision::Passthrough};
        }
        return {join_tokens(attempt.tokens), RewriteDecision::Accepted};
    }
    if (state.latest_partial_used_for_rewriting.empty()) {
        return {std::string(causal_text), state.latest_cascaded_partial.empty()
                                              ? RewriteDecision::Passthrough
                                              : RewriteDecision::Rejected};
    }
    const Composite fallback =
        create_composite(causal, state.latest_partial_used_for_rewriting, params);
    return {join_tokens(fallback.tokens), RewriteDecision::Fallback};
}

std::optional<ResultEvent> process_event(const ResultEvent &event, MergeState &state,
                                         const MergeParams &params, const Tokenizer &tokenize,
                                         RewriteDecision *decision) {
    if (event.kind == Kind::Final) {
        if (event.origin == Origin::Causal) {
            throw InputError("final result from the causal stream at t=" +
                             std::to_string(event.time_ms) + "ms");
        }
        return event;
    }
    if (event.origin == Origin::Cascaded) {
        state.latest_cascaded_partial = tokenize(event.text);
        return std::nullopt;
    }
    RewriteOutcome rewritten = rewrite_result(event.text, state, params, tokenize);
    if (decision) *decision = rewritten.decision;
    return ResultEvent{event.time_ms, Origin::Causal, Kind::Partial, std::move(rewritten.text)};
}

void MergeStats::record(RewriteDecision decision) {
    switch (decision) {
    case RewriteDecision::Passthrough: ++passthrough; break;
    case RewriteDecision::Accepted: ++accepted; break;
    case RewriteDecision::Fallback: ++fallback; break;
    case RewriteDecision::Rejected: ++rejected; break;
    }
}

MergeStats &MergeStats::operator+=(const MergeStats &other) {
    accepted += other.accepted;
    fallback += other.fallback;
    rejected += other.rejected;
    passthrough += other.passthrough;
    rewrite_us.insert(rewrite_us.end(), other.rewrite_us.begin(), other.rewrite_us.end());
    return *this;
}

double MergeStats::mean_rewrite_us() const {
    if (rewrite_us.empty()) return 0.0;
    return std::accumulate(rewrite_us.begin(), rewrite_us.end(), 0.0) /
           static_cast<double>(rewrite_us.size());
}

double MergeStats::p99_rewrite_us() const {
    if (rewrite_us.empty()) return 0.0;
    std::vector<double> sorted = rewrite_us;
    const auto rank = static_cast<std::size_t>(std::ceil(0.99 * static_cast<double>(sorted.size()))) - 1;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(rank), sorted.end());
    return sorted[rank];
}

MergeSession::MergeSession(MergeParams params, Tokenizer tokenize)
    : params_(params), tokenize_(std::move(tokenize)) {
    params_.validate();
}

std::optional<ResultEvent> MergeSession::process(const ResultEvent &event) {
    const bool rewrites = event.origin == Origin::Causal && event.kind == Kind::Partial;
    if (!rewrites) return process_event(event, state_, params_, tokenize_);

    RewriteDecision decision{};
    const auto start = std::chrono::steady_clock::now();
    auto out = process_event(event, state_, params_, tokenize_, &decision);
    const auto elapsed = std::chrono::steady_clock::now() - start;
    stats_.rewrite_us.push_back(std::chrono::duration<double, std::micro>(elapsed).count());
    stats_.record(decision);
    return out;
}

std::vector<ResultEvent> merge_stream(const std::vector<ResultEvent> &events,
                                      const MergeParams &params, MergeStats *stats) {
    for (std::size_t k = 1; k < events.size(); ++k) {
        if (!ordered_before_or_equal(events[k - 1], events[k])) {
            throw InputError("events out of order at index " + std::to_string(k) + " (t=" +
                             std::to_string(events[k].time_ms) + "ms)");
        }
    }
    MergeSession session(params);
    std::vector<ResultEvent> out;
    for (const auto &event : events) {
        if (auto emitted = session.process(event)) out.push_back(std::move(*emitted));
    }
    if (stats) *stats += session.stats();
    return out;
}

} // namespace pmerge
