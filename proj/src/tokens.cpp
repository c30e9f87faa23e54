#include "pmerge/tokens.hpp"

#include <algorithm>
#include <cctype>

namespace pmerge {

namespace {

bool is_space(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

bool has_marker(const std::string &token) {
    return !token.empty() && token.front() == kWordBoundary;
}

} // namespace

TokenSeq split_tokens(std::string_view text) {
    TokenSeq out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_space(text[i])) ++i;
        std::size_t start = i;
        while (i < text.size() && !is_space(text[i])) ++i;
        if (i > start) out.emplace_back(text.substr(start, i - start));
    }
    return out;
}

std::string join_tokens(TokenSpan tokens) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out.push_back(' ');
        out += tokens[i];
    }
    return out;
}

TokenSeq words_from_pieces(TokenSpan pieces) {
    if (std::none_of(pieces.begin(), pieces.end(), has_marker)) {
        return TokenSeq(pieces.begin(), pieces.end());
    }
    TokenSeq words;
    for (const auto &piece : pieces) {
        if (has_marker(piece) || words.empty()) {
            words.emplace_back(has_marker(piece) ? piece.substr(1) : piece);
        } else {
            words.back() += piece;
        }
    }
    // A bare "_" piece opens an empty word; drop those.
    std::erase_if(words, [](const std::string &w) { return w.empty(); });
    return words;
}

TokenSeq words_from_text(std::string_view text) {
    return words_from_pieces(split_tokens(text));
}

TokenSeq pieces_from_word(std::string_view word) {
    TokenSeq out;
    if (word.empty()) return out;
    if (word.size() <= 4) {
        out.push_back(std::string(1, kWordBoundary) + std::string(word));
        return out;
    }
    out.push_back(std::string(1, kWordBoundary) + std::string(word.substr(0, 3)));
    for (std::size_t i = 3; i < word.size(); i += 3) {
        out.emplace_back(word.substr(i, 3));
    }
    return out;
}

TokenSeq pieces_from_words(TokenSpan words) {
    TokenSeq out;
    for (const auto &w : words) {
        auto p = pieces_from_word(w);
        out.insert(out.end(), p.begin(), p.end());
    }
    return out;
}

} // namespace pmerge
