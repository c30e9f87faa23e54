#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>

namespace pmerge {

// Origin priority doubles as the tie-break at equal timestamps: a causal
// partial always sees the freshest cascaded context.
enum class Origin : std::uint8_t { Cascaded = 0, Causal = 1 };
enum class Kind : std::uint8_t { Partial = 0, Final = 1 };

std::string_view to_string(Origin origin);
std::string_view to_string(Kind kind);
std::optional<Origin> parse_origin(std::string_view text);
std::optional<Kind> parse_kind(std::string_view text);

struct ResultEvent {
    std::int64_t time_ms = 0;
    Origin origin = Origin::Causal;
    Kind kind = Kind::Partial;
    std::string text;

    bool operator==(const ResultEvent &) const = default;
};

// Events of one utterance must be non-decreasing under this key.
inline auto order_key(const ResultEvent &e) {
    return std::make_tuple(e.time_ms, e.origin, e.kind);
}

inline bool ordered_before_or_equal(const ResultEvent &a, const ResultEvent &b) {
    return order_key(a) <= order_key(b);
}

} // namespace pmerge
