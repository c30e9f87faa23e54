#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "pmerge/tokens.hpp"

namespace pmerge {

// Edit operations seen from the cascaded side x (rows) against the causal
// side y (columns):
//   Correct/Substitute consume one token of each,
//   Insert consumes a cascaded token only,
//   Delete consumes a causal token only.
enum class EditOp : char {
    Correct = 'C',
    Substitute = 'S',
    Insert = 'I',
    Delete = 'D',
};

constexpr char to_char(EditOp op) { return static_cast<char>(op); }

// "C,I,S,S,C"
std::string path_to_string(const std::vector<EditOp> &path);

// Full Levenshtein table C(i, j) for x[0, i) against y[0, j), unit costs.
class CostGrid {
  public:
    CostGrid(TokenSpan x, TokenSpan y);

    std::size_t rows() const { return rows_; } // m + 1
    std::size_t cols() const { return cols_; } // n + 1

    int at(std::size_t i, std::size_t j) const { return cells_[i * cols_ + j]; }

  private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<int> cells_;
};

struct AlignmentOutcome {
    // C(m, j) for j in [0, n] of the aligned (possibly windowed) region.
    std::vector<int> last_row_costs;
    // Endpoint on the causal side, relative to the window start.
    std::size_t best_j = 0;
    int best_cost = 0;
    // Edit path from (0, 0) to (m, best_j) of the aligned region.
    std::vector<EditOp> path;
    // Tokens skipped on both sides before alignment.
    std::size_t window_offset = 0;

    bool operator==(const AlignmentOutcome &) const = default;
};

// Variable-endpoint alignment: all of x must be consumed, y only up to the
// endpoint minimising the last row. Ties go to the largest endpoint; backtrace
// ties prefer Correct, Substitute, Delete, Insert in that order.
AlignmentOutcome lev_align(TokenSpan x, TokenSpan y);

// x followed by y[j_star, n). Throws std::out_of_range if j_star > |y|.
TokenSeq compose(TokenSpan x, TokenSpan y, std::size_t j_star);

// Number of leading tokens skipped so the shorter side is at most `window`
// long: max(min(m, n) - window, 1), or 0 if either side is empty.
std::size_t window_offset(std::size_t m, std::size_t n, std::size_t window);

// lev_align on x[P, m) against y[P, n) with P = window_offset(m, n, window).
// Throws std::invalid_argument if window == 0.
AlignmentOutcome windowed_align(TokenSpan x, TokenSpan y, std::size_t window);

// x followed by y[P + best_j, n) for an outcome of windowed_align (or
// lev_align, where P = 0).
TokenSeq compose_windowed(TokenSpan x, TokenSpan y, const AlignmentOutcome &outcome);

// C(m, n) / m over the aligned region; 0 when m == 0 (gate never blocks).
double cost_full(const AlignmentOutcome &outcome, std::size_t m);

// (C(m, n) - C(max(m-K, 0), max(n-K, 0))) / min(K, m) on the full grid;
// 0 when m == 0. Throws std::invalid_argument if k == 0.
double cost_recent_grid(TokenSpan x, TokenSpan y, std::size_t k);

} // namespace pmerge
