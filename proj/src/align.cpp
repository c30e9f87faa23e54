#include "pmerge/align.hpp"

#include <algorithm>
#include <stdexcept>

namespace pmerge {

std::string path_to_string(const std::vector<EditOp> &path) {
    std::string out;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i) out.push_back(',');
        out.push_back(to_char(path[i]));
    }
    return out;
}

CostGrid::CostGrid(TokenSpan x, TokenSpan y)
    : rows_(x.size() + 1), cols_(y.size() + 1), cells_(rows_ * cols_) {
    for (std::size_t j = 0; j < cols_; ++j) cells_[j] = static_cast<int>(j);
    for (std::size_t i = 1; i < rows_; ++i) {
        int *row = &cells_[i * cols_];
        const int *up = row - cols_;
        row[0] = static_cast<int>(i);
        for (std::size_t j = 1; j < cols_; ++j) {
            int diag = up[j - 1] + (x[i - 1] == y[j - 1] ? 0 : 1);
            row[j] = std::min({diag, up[j] + 1, row[j - 1] + 1});
        }
    }
}

AlignmentOutcome lev_align(TokenSpan x, TokenSpan y) {
    const CostGrid grid(x, y);
    const std::size_t m = x.size();
    const std::size_t n = y.size();

    AlignmentOutcome out;
    out.last_row_costs.resize(n + 1);
    for (std::size_t j = 0; j <= n; ++j) out.last_row_costs[j] = grid.at(m, j);

    out.best_j = 0;
    out.best_cost = out.last_row_costs[0];
    for (std::size_t j = 1; j <= n; ++j) {
        if (out.last_row_costs[j] <= out.best_cost) {
            out.best_cost = out.last_row_costs[j];
            out.best_j = j;
        }
    }

    std::size_t i = m;
    std::size_t j = out.best_j;
    while (i > 0 || j > 0) {
        const int here = grid.at(i, j);
        if (i > 0 && j > 0) {
            const int diag = grid.at(i - 1, j - 1);
            if (x[i - 1] == y[j - 1] && diag == here) {
                out.path.push_back(EditOp::Correct);
                --i, --j;
                continue;
            }
            if (x[i - 1] != y[j - 1] && diag + 1 == here) {
                out.path.push_back(EditOp::Substitute);
                --i, --j;
                continue;
            }
        }
        if (j > 0 && grid.at(i, j - 1) + 1 == here) {
            out.path.push_back(EditOp::Delete);
            --j;
            continue;
        }
        out.path.push_back(EditOp::Insert);
        --i;
    }
    std::reverse(out.path.begin(), out.path.end());
    return out;
}

TokenSeq compose(TokenSpan x, TokenSpan y, std::size_t j_star) {
    if (j_star > y.size()) {
        throw std::out_of_range("compose: endpoint " + std::to_string(j_star) +
                                " exceeds causal length " + std::to_string(y.size()));
    }
    TokenSeq out(x.begin(), x.end());
    out.insert(out.end(), y.begin() + static_cast<std::ptrdiff_t>(j_star), y.end());
    return out;
}

std::size_t window_offset(std::size_t m, std::size_t n, std::size_t window) {
    if (m == 0 || n == 0) return 0;
    const std::size_t shorter = std::min(m, n);
    return shorter > window + 1 ? shorter - window : 1;
}

AlignmentOutcome windowed_align(TokenSpan x, TokenSpan y, std::size_t window) {
    if (window == 0) throw std::invalid_argument("windowed_align: window must be >= 1");
    const std::size_t p = window_offset(x.size(), y.size(), window);
    auto out = lev_align(x.subspan(p), y.subspan(p));
    out.window_offset = p;
    return out;
}

TokenSeq compose_windowed(TokenSpan x, TokenSpan y, const AlignmentOutcome &outcome) {
    return compose(x, y, outcome.window_offset + outcome.best_j);
}

double cost_full(const AlignmentOutcome &outcome, std::size_t m) {
    if (m == 0) return 0.0;
    return static_cast<double>(outcome.last_row_costs.back()) / static_cast<double>(m);
}

double cost_recent_grid(TokenSpan x, TokenSpan y, std::size_t k) {
    if (k == 0) throw std::invalid_argument("cost_recent_grid: K must be >= 1");
    const std::size_t m = x.size();
    const std::size_t n = y.size();
    if (m == 0) return 0.0;
    const CostGrid grid(x, y);
    const int recent = grid.at(m, n) - grid.at(m > k ? m - k : 0, n > k ? n - k : 0);
    return static_cast<double>(recent) / static_cast<double>(std::min(k, m));
}

} // namespace pmerge
