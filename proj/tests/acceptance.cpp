// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pmerge/align.hpp"
#include "pmerge/logio.hpp"
#include "pmerge/merge.hpp"
#include "pmerge/metrics.hpp"
#include "pmerge/pipeline.hpp"
#include "pmerge/simgen.hpp"

using namespace pmerge;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string &what) {
        if (!ok && pass) detail << "first failure: " << what << "; ";
        pass = pass && ok;
    }
};

int failures = 0;

void criterion(int id, const std::string &name, const std::function<void(Outcome &)> &body) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception &e) {
        o.pass = false;
        o.detail << "exception: " << e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("[%s] %d. %s (%.2fs) %s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), secs,
                o.detail.str().c_str());
    std::fflush(stdout);
}

// The fixed-seed synthetic corpus behind criteria 4, 6, 7 and 9.
const std::vector<UtteranceLog> &corpus() {
    static const std::vector<UtteranceLog> logs = [] {
        sim::SimConfig c;
        c.causal_error_rate = 0.08;
        c.cascaded_error_rate = 0.02;
        c.cascaded_delay_ms = 900;
        c.causal_word_interval_ms = 300;
        c.seed = 2024;
        return sim::generate_corpus(sim::synthetic_references(200, 20, 60, 2024), c);
    }();
    return logs;
}

std::vector<const ResultEvent *> visible_partials(const UtteranceLog &log) {
    std::vector<const ResultEvent *> out;
    for (const auto &e : log.events) {
        if (e.kind == Kind::Partial && e.origin == Origin::Causal) out.push_back(&e);
    }
    return out;
}

const ResultEvent *final_event(const UtteranceLog &log) {
    for (const auto &e : log.events) {
        if (e.kind == Kind::Final) return &e;
    }
    return nullptr;
}

bool starts_with(const TokenSeq &whole, const TokenSeq &head) {
    return head.size() <= whole.size() && std::equal(head.begin(), head.end(), whole.begin());
}

// Adjacent steps that move against `direction` (+1 non-decreasing, -1 non-increasing).
int inversions(const std::vector<double> &curve, int direction) {
    int count = 0;
    for (std::size_t k = 1; k < curve.size(); ++k) {
        if (direction * (curve[k] - curve[k - 1]) < 0) ++count;
    }
    return count;
}

std::string render(const std::vector<std::string> &grid, const std::vector<double> &curve) {
    std::ostringstream s;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        s << (k ? " " : "") << grid[k] << ":" << curve[k];
    }
    return s.str();
}

// Noisy copy of `base` for window tests: per-token substitution, deletion or insertion.
oracle::Seq corrupt(const oracle::Seq &base, double rate, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    oracle::Seq out;
    for (const auto &t : base) {
        const double r = u(rng);
        if (r < rate / 3) {
            out.push_back("s" + t);
        } else if (r < 2 * rate / 3) {
            continue;
        } else if (r < rate) {
            out.push_back(t);
            out.push_back("n" + t);
        } else {
            out.push_back(t);
        }
    }
    return out;
}

} // namespace

int main() {
    std::cout << std::setprecision(6);

    criterion(1, "Rosalie golden case", [](Outcome &o) {
        const TokenSeq causal = {"_ro", "za", "ee", "_how", "_are", "_you"};
        const TokenSeq cascaded = {"_ro", "sa", "l", "ie", "_how"};
        const auto al = lev_align(cascaded, causal);
        o.require(al.last_row_costs == std::vector<int>{5, 4, 4, 4, 3, 4, 5}, "last row");
        o.require(al.best_j == 4, "j* == 4");
        o.require(al.best_cost == 3, "cost == 3");
        o.require(path_to_string(al.path) == "C,I,S,S,C", "path C,I,S,S,C");
        o.require(join_tokens(compose(cascaded, causal, al.best_j)) ==
                      "_ro sa l ie _how _are _you",
                  "composite");

        MergeParams p;
        p.trim_t = 0;
        p.window_m.reset();
        p.recent_k = 5;
        p.rho_r_threshold = 0.7;
        const auto logs = read_log(std::string(PMERGE_SAMPLES_DIR) + "/rosalie.jsonl");
        const auto merged = merge_corpus(logs, p);
        const auto partials = visible_partials(merged.logs.at(0));
        o.require(!partials.empty() && partials.back()->text == "_ro sa l ie _how _are _you",
                  "merged sample log");
        o.detail << "last row 5,4,4,4,3,4,5 j*=" << al.best_j << " cost=" << al.best_cost
                 << " path=" << path_to_string(al.path);
    });

    criterion(2, "variable-endpoint cost equals brute force over causal prefixes", [](Outcome &o) {
        std::mt19937_64 rng(20240601);
        int pairs = 0;
        for (; pairs < 1000; ++pairs) {
            const int alphabet = 2 + static_cast<int>(rng() % 9);
            const auto x = oracle::random_seq(rng, 30, alphabet);
            const auto y = oracle::random_seq(rng, 30, alphabet);
            const auto [cost, arg] = oracle::best_prefix(x, y);
            const auto al = lev_align(x, y);
            o.require(al.best_cost == cost, "best_cost mismatch at pair " + std::to_string(pairs));
            o.require(al.best_j == arg, "tie-break mismatch at pair " + std::to_string(pairs));
        }
        o.detail << pairs << " pairs, lengths <= 30, alphabet <= 10";
    });

    criterion(3, "windowed alignment agrees with the full DP", [](Outcome &o) {
        std::mt19937_64 rng(77);
        int covered = 0;
        while (covered < 1000) {
            auto x = oracle::random_seq(rng, 30, 10);
            auto y = oracle::random_seq(rng, 30, 10);
            if (x.empty() || y.empty()) continue;
            y[0] = x[0];
            const std::size_t m = std::min(x.size(), y.size()) + rng() % 10;
            const auto w = windowed_align(x, y, m);
            o.require(compose_windowed(x, y, w) == compose(x, y, lev_align(x, y).best_j),
                      "covered window differs from full DP");
            ++covered;
        }

        int agree = 0, total = 0;
        for (int trial = 0; trial < 1000; ++trial) {
            const std::size_t len = 1 + rng() % 200;
            const auto base = oracle::random_seq(rng, len, 10);
            const auto y = corrupt(base, 0.15, rng);
            const std::size_t lag = std::min<std::size_t>(base.size(), rng() % 9);
            const auto x = corrupt(oracle::prefix(base, base.size() - lag), 0.05, rng);
            const auto w = windowed_align(x, y, 25);
            const auto z = compose_windowed(x, y, w);
            // Well-formed: all of x, then a suffix of y.
            const bool well_formed =
                starts_with(z, x) && z.size() - x.size() <= y.size() &&
                std::equal(z.begin() + static_cast<long>(x.size()), z.end(),
                           y.end() - static_cast<long>(z.size() - x.size()));
            o.require(well_formed, "malformed windowed composite");
            ++total;
            if (z == compose(x, y, lev_align(x, y).best_j)) ++agree;
        }
        o.detail << covered << " covered-window pairs identical; M=25 on lengths <= 200: "
                 << agree << "/" << total << " composites equal the full DP";
    });

    criterion(4, "finals pass through, partial counts and timestamps unchanged", [](Outcome &o) {
        const auto &logs = corpus();
        const auto merged = merge_corpus(logs, MergeParams{});
        o.require(logs.size() >= 200, "corpus size");
        std::size_t partials = 0;
        for (std::size_t u = 0; u < logs.size(); ++u) {
            const ResultEvent *in_final = final_event(logs[u]);
            const ResultEvent *out_final = final_event(merged.logs[u]);
            o.require(in_final && out_final && *in_final == *out_final,
                      "final changed in " + logs[u].utterance_id);
            auto in_p = visible_partials(logs[u]);
            auto out_p = visible_partials(merged.logs[u]);
            o.require(in_p.size() == out_p.size(), "partial count in " + logs[u].utterance_id);
            std::vector<std::int64_t> a, b;
            for (auto *e : in_p) a.push_back(e->time_ms);
            for (auto *e : out_p) b.push_back(e->time_ms);
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            o.require(a == b, "timestamps in " + logs[u].utterance_id);
            partials += out_p.size();
        }
        const auto check = compare_with_baseline(merged.logs, logs);
        o.require(check.finals_identical && check.timestamps_identical, "baseline check");
        o.detail << logs.size() << " utterances, " << partials << " partials";
    });

    criterion(5, "gate endpoints", [](Outcome &o) {
        const auto &logs = corpus();
        MergeParams closed;
        closed.rho_r_threshold = 0.0;
        const auto shut = merge_corpus(logs, closed);
        for (std::size_t u = 0; u < logs.size(); ++u) {
            const auto in_p = visible_partials(logs[u]);
            const auto out_p = visible_partials(shut.logs[u]);
            for (std::size_t k = 0; k < in_p.size(); ++k) {
                o.require(in_p[k]->text == out_p[k]->text, "rho_r=0 changed a causal text");
            }
        }

        MergeParams open;
        open.rho_r_threshold = kGateDisabled;
        open.trim_t = 0;
        open.window_m.reset();
        std::size_t checked = 0;
        for (const auto &log : logs) {
            MergeState state;
            TokenSeq latest;
            for (const auto &e : log.events) {
                if (e.kind == Kind::Partial && e.origin == Origin::Cascaded) latest = split_tokens(e.text);
                const auto emitted = process_event(e, state, open);
                if (!emitted || emitted->kind != Kind::Partial) continue;
                o.require(starts_with(split_tokens(emitted->text), latest),
                          "open gate did not adopt the cascaded partial");
                ++checked;
            }
        }
        o.detail << "rho_r=0 verbatim; rho_r=inf adopted cascaded prefix in " << checked
                 << " partials";
    });

    criterion(6, "merged stream reduces PWER by >= 10% relative", [](Outcome &o) {
        const auto &logs = corpus();
        const auto base = evaluate_corpus(logs).corpus;
        const auto test = evaluate_corpus(merge_corpus(logs, MergeParams{}).logs).corpus;
        const double pwer_base = base.pwer.value();
        const double pwer_test = test.pwer.value();
        o.require(pwer_test <= 0.9 * pwer_base, "PWER margin");
        o.require(test.upwr_transition.value() < base.upwr_transition.value(),
                  "transition UPWR must decrease");
        o.require(test.upwr_partials.value() > base.upwr_partials.value(),
                  "partial UPWR must increase");
        o.detail << "PWER " << pwer_base << " -> " << pwer_test << " ("
                 << *delta_percent(pwer_test, pwer_base) << "%), UPWR part "
                 << base.upwr_partials.value() << " -> " << test.upwr_partials.value()
                 << ", trans " << base.upwr_transition.value() << " -> "
                 << test.upwr_transition.value() << ", all " << base.upwr_all.value() << " -> "
                 << test.upwr_all.value();
    });

    criterion(7, "sweep trends for T, rho_r and K", [](Outcome &o) {
        const auto &logs = corpus();
        auto sweep = [&](const std::vector<std::string> &grid,
                         const std::function<void(MergeParams &, std::size_t)> &set,
                         const std::function<double(const metrics::MetricsReport &)> &read) {
            std::vector<double> curve;
            for (std::size_t k = 0; k < grid.size(); ++k) {
                MergeParams p;
                set(p, k);
                curve.push_back(read(evaluate_corpus(merge_corpus(logs, p).logs).corpus));
            }
            return curve;
        };
        auto pwer = [](const metrics::MetricsReport &r) { return r.pwer.value(); };
        auto upwr_partials = [](const metrics::MetricsReport &r) { return r.upwr_partials.value(); };

        const std::vector<std::size_t> t_values = {0, 1, 2, 3, 4, 6, 8};
        const std::vector<std::string> t_grid = {"0", "1", "2", "3", "4", "6", "8"};
        const auto t_curve =
            sweep(t_grid, [&](MergeParams &p, std::size_t k) { p.trim_t = t_values[k]; }, pwer);

        const std::vector<double> r_values = {0.0, 0.1, 0.2, 0.3, 0.5, 0.7, 1.0, kGateDisabled};
        const std::vector<std::string> r_grid = {"0", "0.1", "0.2", "0.3", "0.5", "0.7", "1", "inf"};
        const auto r_curve = sweep(
            r_grid, [&](MergeParams &p, std::size_t k) { p.rho_r_threshold = r_values[k]; }, pwer);
        const double causal_pwer = evaluate_corpus(logs).corpus.pwer.value();

        const std::vector<std::size_t> k_values = {0, 1, 2, 3, 5, 10, 15, 20};
        const std::vector<std::string> k_grid = {"0", "1", "2", "3", "5", "10", "15", "20"};
        const auto k_curve = sweep(
            k_grid, [&](MergeParams &p, std::size_t k) { p.recent_k = k_values[k]; }, upwr_partials);

        const int t_inv = inversions(t_curve, +1);
        const int r_inv = inversions(r_curve, -1);
        const int k_inv = inversions(k_curve, -1);
        o.require(t_inv <= 1, "PWER vs T not non-decreasing");
        o.require(r_curve.front() == causal_pwer, "rho_r=0 PWER differs from causal PWER");
        o.require(r_inv <= 1, "PWER vs rho_r not non-increasing");
        o.require(k_inv <= 1, "UPWR(partials) vs K not non-increasing");
        o.detail << "\n      PWER vs T [" << t_inv << " inv]: " << render(t_grid, t_curve)
                 << "\n      PWER vs rho_r [" << r_inv << " inv]: " << render(r_grid, r_curve)
                 << "\n      UPWR(partials) vs K [" << k_inv << " inv]: "
                 << render(k_grid, k_curve);
    });

    criterion(8, "pwer and upwr_three_way match brute-force recounts", [](Outcome &o) {
        std::mt19937_64 rng(808);
        for (int trial = 0; trial < 100; ++trial) {
            const auto ref = oracle::random_seq(rng, 8, 4);
            std::vector<TokenSeq> partials;
            for (int k = 0, n = 1 + static_cast<int>(rng() % 8); k < n; ++k) {
                partials.push_back(oracle::random_seq(rng, 8, 4));
            }
            const auto fin = oracle::random_seq(rng, 8, 4);

            const auto [errors, words] = oracle::pwer(partials, ref);
            o.require(metrics::pwer(partials, ref) == metrics::Ratio{errors, words}, "pwer");

            const auto u = metrics::upwr_three_way(partials, fin);
            auto all = partials;
            all.push_back(fin);
            const auto [pc, pw] = oracle::upwr(partials);
            const auto [tc, tw] = oracle::upwr({partials.back(), fin});
            const auto [ac, aw] = oracle::upwr(all);
            o.require(u.partials == metrics::Ratio{pc, pw}, "upwr partials");
            o.require(u.transition == metrics::Ratio{tc, tw}, "upwr transition");
            o.require(u.all == metrics::Ratio{ac, aw}, "upwr all");
        }
        o.detail << "100 random logs";
    });

    criterion(9, "mean rewrite time below 1 ms with M=25", [](Outcome &o) {
        const auto merged = merge_corpus(corpus(), MergeParams{});
        // Long utterances too, where the window matters.
        sim::SimConfig c;
        c.seed = 99;
        const auto long_logs =
            sim::generate_corpus(sim::synthetic_references(10, 400, 600, 99), c);
        const auto merged_long = merge_corpus(long_logs, MergeParams{});
        const double mean = merged.total.mean_rewrite_us();
        const double mean_long = merged_long.total.mean_rewrite_us();
        o.require(mean < 1000.0 && mean_long < 1000.0, "mean rewrite time >= 1 ms");
        o.detail << "corpus mean " << mean << " us (p99 " << merged.total.p99_rewrite_us()
                 << " us) over " << merged.total.rewrite_us.size() << " rewrites; 400-600 word"
                 << " utterances mean " << mean_long << " us";
    });

    std::printf("%s: %d criterion(s) failed\n", failures ? "FAILED" : "OK", failures);
    return failures ? 1 : 0;
}
