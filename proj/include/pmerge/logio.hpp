#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pmerge/events.hpp"
#include "pmerge/tokens.hpp"

// Line-delimited JSON event logs. Each line is one record:
//
//   {"utterance_id":"u1","kind":"reference","text":"rosalie how are you"}
//   {"utterance_id":"u1","time_ms":500,"origin":"cascaded","kind":"partial","text":"_ro sa"}
//
// Blank lines and lines starting with '#' are ignored. Records of different
// utterances may interleave; utterances keep their first-appearance order.
namespace pmerge {

struct UtteranceLog {
    std::string utterance_id;
    std::optional<TokenSeq> reference; // whole words
    std::vector<ResultEvent> events;

    bool operator==(const UtteranceLog &) const = default;
};

// Throws ParseError (with line number) on malformed records and
// ValidationError on out-of-order events, a second FINAL or a second
// reference in one utterance. Never re-sorts.
std::vector<UtteranceLog> parse_log(std::istream &in, const std::string &source = "<stream>");
std::vector<UtteranceLog> read_log(const std::filesystem::path &path);

void write_log(std::ostream &out, const std::vector<UtteranceLog> &logs);
// Throws std::runtime_error when the file cannot be written.
void write_log(const std::vector<UtteranceLog> &logs, const std::filesystem::path &path);

// Checks the ordering and single-FINAL invariants of one utterance.
void validate(const UtteranceLog &log);

struct ReferenceLine {
    std::string utterance_id;
    TokenSeq words;
};

// Plain-text transcripts, one utterance per line: either "id<TAB>words" or
// just words (ids are then generated as utt0001, utt0002, ...). Blank lines
// and '#' comments are skipped.
std::vector<ReferenceLine> read_references(const std::filesystem::path &path);

} // namespace pmerge
