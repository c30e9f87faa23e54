#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pmerge {

// Word-piece tokens. A leading '_' marks the start of a word and is part of
// the token string; tokens are compared literally.
using TokenSeq = std::vector<std::string>;
using TokenSpan = std::span<const std::string>;

constexpr char kWordBoundary = '_';

// Turns a hypothesis text into tokens. The engine is parametric on this.
using Tokenizer = std::function<TokenSeq(std::string_view)>;

// Splits on ASCII whitespace; never yields empty tokens.
TokenSeq split_tokens(std::string_view text);

// Joins with single spaces. split_tokens(join_tokens(t)) == t whenever no
// token is empty or contains whitespace.
std::string join_tokens(TokenSpan tokens);

// Collapses word pieces into whole words: a piece starting with '_' opens a
// new word, other pieces extend the current one; the marker is dropped.
// Texts with no marker at all are already word-level and pass through.
TokenSeq words_from_pieces(TokenSpan pieces);

// Convenience: split_tokens + words_from_pieces.
TokenSeq words_from_text(std::string_view text);

// Deterministic piece split used by the simulator: words up to four letters
// stay whole, longer words are cut after three letters and then every three.
TokenSeq pieces_from_word(std::string_view word);

TokenSeq pieces_from_words(TokenSpan words);

} // namespace pmerge
