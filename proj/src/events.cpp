#include "pmerge/events.hpp"

namespace pmerge {

std::string_view to_string(Origin origin) {
    return origin == Origin::Cascaded ? "cascaded" : "causal";
}

std::string_view to_string(Kind kind) {
    return kind == Kind::Final ? "final" : "partial";
}

std::optional<Origin> parse_origin(std::string_view text) {
    if (text == "cascaded") return Origin::Cascaded;
    if (text == "causal") return Origin::Causal;
    return std::nullopt;
}

std::optional<Kind> parse_kind(std::string_view text) {
    if (text == "partial") return Kind::Partial;
    if (text == "final") return Kind::Final;
    return std::nullopt;
}

} // namespace pmerge
