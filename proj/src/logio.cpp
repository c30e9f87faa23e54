#include "pmerge/logio.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include "json.hpp"

#include "pmerge/errors.hpp"

namespace pmerge {

namespace {

using nlohmann::json;

bool skippable(const std::string &line) {
    const auto first = line.find_first_not_of(" \t\r");
    return first == std::string::npos || line[first] == '#';
}

std::string string_field(const json &record, const char *name, const std::string &source,
                         std::size_t line_no) {
    auto it = record.find(name);
    if (it == record.end()) {
        throw ParseError(source, line_no, std::string("missing field '") + name + "'");
    }
    if (!it->is_string()) {
        throw ParseError(source, line_no, std::string("field '") + name + "' must be a string");
    }
    return it->get<std::string>();
}

std::string pad_id(std::size_t n) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "utt%04zu", n);
    return buf;
}

} // namespace

void validate(const UtteranceLog &log) {
    bool seen_final = false;
    for (std::size_t k = 0; k < log.events.size(); ++k) {
        const auto &e = log.events[k];
        if (k > 0 && !ordered_before_or_equal(log.events[k - 1], e)) {
            throw ValidationError("utterance '" + log.utterance_id + "': events out of order at t=" +
                                  std::to_string(e.time_ms) + "ms");
        }
        if (e.kind == Kind::Final) {
            if (seen_final) {
                throw ValidationError("utterance '" + log.utterance_id + "': more than one final");
            }
            seen_final = true;
        }
    }
}

std::vector<UtteranceLog> parse_log(std::istream &in, const std::string &source) {
    std::vector<UtteranceLog> logs;
    std::map<std::string, std::size_t> index;
    std::string line;
    std::size_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (skippable(line)) continue;
        json record;
        try {
            record = json::parse(line);
        } catch (const json::parse_error &e) {
            throw ParseError(source, line_no, std::string("invalid JSON: ") + e.what());
        }
        if (!record.is_object()) throw ParseError(source, line_no, "record must be an object");

        const std::string id = string_field(record, "utterance_id", source, line_no);
        const std::string kind_text = string_field(record, "kind", source, line_no);
        const std::string text = string_field(record, "text", source, line_no);

        auto [it, inserted] = index.try_emplace(id, logs.size());
        if (inserted) logs.push_back(UtteranceLog{id, std::nullopt, {}});
        UtteranceLog &log = logs[it->second];

        if (kind_text == "reference") {
            if (log.reference) {
                throw ValidationError("utterance '" + id + "': duplicate reference (line " +
                                      std::to_string(line_no) + ")");
            }
            log.reference = split_tokens(text);
            continue;
        }

        const auto kind = parse_kind(kind_text);
        if (!kind) throw ParseError(source, line_no, "unknown kind '" + kind_text + "'");
        const auto origin = parse_origin(string_field(record, "origin", source, line_no));
        if (!origin) throw ParseError(source, line_no, "unknown origin");
        auto t = record.find("time_ms");
        if (t == record.end()) throw ParseError(source, line_no, "missing field 'time_ms'");
        if (!t->is_number_integer() || t->get<std::int64_t>() < 0) {
            throw ParseError(source, line_no, "time_ms must be a non-negative integer");
        }
        log.events.push_back(ResultEvent{t->get<std::int64_t>(), *origin, *kind, text});
    }

    for (const auto &log : logs) validate(log);
    return logs;
}

std::vector<UtteranceLog> read_log(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open log '" + path.string() + "'");
    return parse_log(in, path.string());
}

void write_log(std::ostream &out, const std::vector<UtteranceLog> &logs) {
    using nlohmann::ordered_json;
    for (const auto &log : logs) {
        if (log.reference) {
            ordered_json r;
            r["utterance_id"] = log.utterance_id;
            r["kind"] = "reference";
            r["text"] = join_tokens(*log.reference);
            out << r.dump() << '\n';
        }
        for (const auto &e : log.events) {
            ordered_json r;
            r["utterance_id"] = log.utterance_id;
            r["time_ms"] = e.time_ms;
            r["origin"] = to_string(e.origin);
            r["kind"] = to_string(e.kind);
            r["text"] = e.text;
            out << r.dump() << '\n';
        }
    }
}

void write_log(const std::vector<UtteranceLog> &logs, const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    write_log(out, logs);
    out.flush();
    if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

std::vector<ReferenceLine> read_references(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open references '" + path.string() + "'");
    std::vector<ReferenceLine> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (skippable(line)) continue;
        ReferenceLine ref;
        const auto tab = line.find('\t');
        if (tab != std::string::npos) {
            ref.utterance_id = line.substr(0, tab);
            ref.words = split_tokens(std::string_view(line).substr(tab + 1));
        } else {
            ref.utterance_id = pad_id(out.size() + 1);
            ref.words = split_tokens(line);
        }
        if (ref.words.empty()) {
            throw ParseError(path.string(), line_no, "empty transcript");
        }
        out.push_back(std::move(ref));
    }
    return out;
}

} // namespace pmerge
