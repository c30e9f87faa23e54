#include "pmerge/metrics.hpp"

#include <algorithm>
#include <stdexcept>

#include "pmerge/align.hpp"

namespace pmerge::metrics {

namespace {

// Reference positions matched exactly by the partial in its prefix alignment.
std::vector<bool> correct_positions(TokenSpan partial, TokenSpan reference) {
    std::vector<bool> correct(reference.size(), false);
    const AlignmentOutcome al = lev_align(partial, reference);
    std::size_t r = 0;
    for (EditOp op : al.path) {
        switch (op) {
        case EditOp::Correct: correct[r++] = true; break;
        case EditOp::Substitute:
        case EditOp::Delete: ++r; break;
        case EditOp::Insert: break;
        }
    }
    return correct;
}

std::size_t common_prefix(const TokenSeq &a, const TokenSeq &b) {
    auto [ia, ib] = std::mismatch(a.begin(), a.end(), b.begin(), b.end());
    return static_cast<std::size_t>(ia - a.begin());
}

} // namespace

PrefixMatch partial_prefix_errors(TokenSpan partial, TokenSpan reference) {
    const AlignmentOutcome al = lev_align(partial, reference);
    return {static_cast<std::size_t>(al.best_cost), al.best_j};
}

Ratio pwer(const std::vector<TokenSeq> &partials, TokenSpan reference) {
    Ratio out;
    for (const auto &partial : partials) {
        const PrefixMatch match = partial_prefix_errors(partial, reference);
        out.numerator += match.errors;
        out.denominator += match.matched_ref_len;
    }
    return out;
}

LatencyTotal partial_latency(const std::vector<TimedWords> &stream, TokenSpan reference) {
    LatencyTotal out;
    if (stream.empty()) return out;

    const std::vector<bool> last_correct = correct_positions(stream.back().words, reference);
    std::vector<bool> alive = last_correct;
    std::vector<std::int64_t> since(reference.size(), stream.back().time_ms);
    // Walk backwards; a position's time moves earlier while it stays correct.
    for (std::size_t s = stream.size() - 1; s-- > 0;) {
        const std::vector<bool> correct = correct_positions(stream[s].words, reference);
        bool any = false;
        for (std::size_t p = 0; p < reference.size(); ++p) {
            if (!alive[p]) continue;
            if (correct[p]) {
                since[p] = stream[s].time_ms;
                any = true;
            } else {
                alive[p] = false;
            }
        }
        if (!any) break;
    }
    for (std::size_t p = 0; p < reference.size(); ++p) {
        if (!last_correct[p]) continue;
        out.sum_ms += since[p];
        ++out.words;
    }
    return out;
}

Ratio upwr(const std::vector<TokenSeq> &results) {
    Ratio out;
    for (std::size_t i = 0; i + 1 < results.size(); ++i) {
        out.numerator += results[i].size() - common_prefix(results[i], results[i + 1]);
        out.denominator += results[i].size();
    }
    return out;
}

UpwrThreeWay upwr_three_way(const std::vector<TokenSeq> &partials,
                            const std::optional<TokenSeq> &final_result) {
    UpwrThreeWay out;
    out.partials = upwr(partials);
    if (!final_result) {
        out.all = out.partials;
        return out;
    }
    if (!partials.empty()) out.transition = upwr({partials.back(), *final_result});
    std::vector<TokenSeq> all = partials;
    all.push_back(*final_result);
    out.all = upwr(all);
    return out;
}

Ratio wer(TokenSpan hypothesis, TokenSpan reference) {
    if (reference.empty()) throw std::invalid_argument("wer: empty reference");
    const CostGrid grid(hypothesis, reference);
    return {static_cast<std::uint64_t>(grid.at(hypothesis.size(), reference.size())),
            reference.size()};
}

MetricsReport &MetricsReport::operator+=(const MetricsReport &o) {
    pwer += o.pwer;
    latency += o.latency;
    upwr_partials += o.upwr_partials;
    upwr_transition += o.upwr_transition;
    upwr_all += o.upwr_all;
    final_wer += o.final_wer;
    partial_count += o.partial_count;
    final_count += o.final_count;
    return *this;
}

MetricsReport evaluate_stream(const std::vector<ResultEvent> &events, TokenSpan reference) {
    std::vector<TokenSeq> partials;
    std::vector<TimedWords> timed;
    std::optional<TokenSeq> final_words;
    for (const auto &e : events) {
        if (e.kind == Kind::Final) {
            final_words = words_from_text(e.text);
        } else if (e.origin == Origin::Causal) {
            partials.push_back(words_from_text(e.text));
            timed.push_back({e.time_ms, partials.back()});
        }
    }

    MetricsReport report;
    report.pwer = pwer(partials, reference);
    report.latency = partial_latency(timed, reference);
    const UpwrThreeWay u = upwr_three_way(partials, final_words);
    report.upwr_partials = u.partials;
    report.upwr_transition = u.transition;
    report.upwr_all = u.all;
    if (final_words && !reference.empty()) report.final_wer = wer(*final_words, reference);
    report.partial_count = partials.size();
    report.final_count = final_words ? 1 : 0;
    return report;
}

nlohmann::json to_json(const MetricsReport &r) {
    auto ratio = [](const Ratio &x) {
        return nlohmann::json{{"numerator", x.numerator}, {"denominator", x.denominator}};
    };
    nlohmann::json out;
    out["pwer"] = r.pwer.value();
    if (auto pl = r.latency.mean()) {
        out["partial_latency_ms"] = *pl;
    } else {
        out["partial_latency_ms"] = nullptr;
    }
    out["upwr_partials"] = r.upwr_partials.value();
    out["upwr_transition"] = r.upwr_transition.value();
    out["upwr_all"] = r.upwr_all.value();
    out["final_wer"] = r.final_wer.value();
    out["counts"] = {
        {"pwer", ratio(r.pwer)},
        {"partial_latency", {{"sum_ms", r.latency.sum_ms}, {"words", r.latency.words}}},
        {"upwr_partials", ratio(r.upwr_partials)},
        {"upwr_transition", ratio(r.upwr_transition)},
        {"upwr_all", ratio(r.upwr_all)},
        {"final_wer", ratio(r.final_wer)},
        {"partials", r.partial_count},
        {"finals", r.final_count},
    };
    return out;
}

} // namespace pmerge::metrics
