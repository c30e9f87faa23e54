#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pmerge/errors.hpp"
#include "pmerge/logio.hpp"
#include "pmerge/simgen.hpp"

using namespace pmerge;

namespace {

std::vector<UtteranceLog> parse(const std::string &text) {
    std::istringstream in(text);
    return parse_log(in, "test");
}

std::string write(const std::vector<UtteranceLog> &logs) {
    std::ostringstream out;
    write_log(out, logs);
    return out.str();
}

std::size_t parse_error_line(const std::string &text) {
    try {
        parse(text);
    } catch (const ParseError &e) {
        return e.line();
    }
    return 0;
}

} // namespace

TEST_CASE("read a two-utterance log") {
    const auto logs = parse(
        "# comment\n"
        "{\"utterance_id\":\"a\",\"kind\":\"reference\",\"text\":\"how are you\"}\n"
        "\n"
        "{\"utterance_id\":\"a\",\"time_ms\":100,\"origin\":\"causal\",\"kind\":\"partial\",\"text\":\"_how\"}\n"
        "{\"utterance_id\":\"b\",\"time_ms\":50,\"origin\":\"causal\",\"kind\":\"partial\",\"text\":\"_hi\"}\n"
        "{\"utterance_id\":\"a\",\"time_ms\":900,\"origin\":\"cascaded\",\"kind\":\"final\",\"text\":\"_how _are _you\"}\n");
    REQUIRE(logs.size() == 2);
    CHECK(logs[0].utterance_id == "a");
    CHECK(logs[0].reference == TokenSeq{"how", "are", "you"});
    REQUIRE(logs[0].events.size() == 2);
    CHECK(logs[0].events[1] == ResultEvent{900, Origin::Cascaded, Kind::Final, "_how _are _you"});
    CHECK(logs[1].utterance_id == "b");
    CHECK_FALSE(logs[1].reference.has_value());
}

TEST_CASE("malformed lines report their line number") {
    const std::string good =
        "{\"utterance_id\":\"a\",\"time_ms\":1,\"origin\":\"causal\",\"kind\":\"partial\",\"text\":\"x\"}\n";
    CHECK(parse_error_line(good +
                           "{\"utterance_id\":\"a\",\"time_ms\":2,\"kind\":\"partial\",\"text\":\"x\"}\n") == 2);
    CHECK(parse_error_line(good + "\n{not json\n") == 3);
    CHECK(parse_error_line(good +
                           "{\"utterance_id\":\"a\",\"time_ms\":-5,\"origin\":\"causal\",\"kind\":\"partial\",\"text\":\"x\"}\n") == 2);
    CHECK(parse_error_line(good +
                           "{\"utterance_id\":\"a\",\"time_ms\":5,\"origin\":\"left\",\"kind\":\"partial\",\"text\":\"x\"}\n") == 2);
    CHECK(parse_error_line("{\"utterance_id\":\"a\",\"time_ms\":5,\"origin\":\"causal\",\"kind\":\"partial\"}\n") == 1);
    CHECK(parse_error_line("[1,2]\n") == 1);
}

TEST_CASE("validation errors name the utterance") {
    const std::string out_of_order =
        "{\"utterance_id\":\"u7\",\"time_ms\":200,\"origin\":\"causal\",\"kind\":\"partial\",\"text\":\"x\"}\n"
        "{\"utterance_id\":\"u7\",\"time_ms\":100,\"origin\":\"causal\",\"kind\":\"partial\",\"text\":\"y\"}\n";
    CHECK_THROWS_WITH_AS(parse(out_of_order), doctest::Contains("u7"), ValidationError);

    const std::string tie_order =
        "{\"utterance_id\":\"u8\",\"time_ms\":100,\"origin\":\"causal\",\"kind\":\"partial\",\"text\":\"x\"}\n"
        "{\"utterance_id\":\"u8\",\"time_ms\":100,\"origin\":\"cascaded\",\"kind\":\"partial\",\"text\":\"y\"}\n";
    CHECK_THROWS_WITH_AS(parse(tie_order), doctest::Contains("u8"), ValidationError);

    const std::string two_finals =
        "{\"utterance_id\":\"u9\",\"time_ms\":100,\"origin\":\"cascaded\",\"kind\":\"final\",\"text\":\"x\"}\n"
        "{\"utterance_id\":\"u9\",\"time_ms\":200,\"origin\":\"cascaded\",\"kind\":\"final\",\"text\":\"y\"}\n";
    CHECK_THROWS_WITH_AS(parse(two_finals), doctest::Contains("u9"), ValidationError);
}

TEST_CASE("round trips") {
    SUBCASE("empty") {
        CHECK(write({}).empty());
        CHECK(parse("").empty());
    }
    SUBCASE("unicode pieces") {
        const std::vector<UtteranceLog> logs = {
            {"\xc3\xa9t\xc3\xa9", TokenSeq{"caf\xc3\xa9", "\xe4\xbd\xa0\xe5\xa5\xbd"},
             {{10, Origin::Causal, Kind::Partial, "_caf \xc3\xa9 _\xe4\xbd\xa0\xe5\xa5\xbd"},
              {90, Origin::Cascaded, Kind::Final, "_caf\xc3\xa9 \"quoted\" \\ tab\t"}}},
        };
        const std::string text = write(logs);
        CHECK(parse(text) == logs);
        CHECK(write(parse(text)) == text);
    }
    SUBCASE("simulated corpus through a file") {
        sim::SimConfig c;
        c.causal_jitter_ms = 60;
        c.monotone = false;
        const auto logs = sim::generate_corpus(sim::synthetic_references(20, 3, 30, 4), c);
        const auto path = std::filesystem::temp_directory_path() / "pmerge_logio_roundtrip.jsonl";
        write_log(logs, path);
        CHECK(read_log(path) == logs);
        std::filesystem::remove(path);
    }
}

TEST_CASE("file errors") {
    CHECK_THROWS_AS(read_log("/nonexistent/dir/log.jsonl"), InputError);
    CHECK_THROWS_AS(write_log({}, "/nonexistent/dir/log.jsonl"), std::runtime_error);
}

TEST_CASE("reference files") {
    const auto path = std::filesystem::temp_directory_path() / "pmerge_refs.txt";
    {
        std::ofstream out(path);
        out << "# header\nhow are you\n\nid42\trosalie how are you\nhello\n";
    }
    const auto refs = read_references(path);
    REQUIRE(refs.size() == 3);
    CHECK(refs[0].utterance_id == "utt0001");
    CHECK(refs[0].words == TokenSeq{"how", "are", "you"});
    CHECK(refs[1].utterance_id == "id42");
    CHECK(refs[2].utterance_id == "utt0003");
    std::filesystem::remove(path);
}
