#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "arag/corpus.hpp"
#include "test_util.hpp"

using namespace arag;

TEST_CASE("load_corpus ingests well-formed lines in order") {
    testutil::TempDir tmp;
    auto path = tmp.file("corpus.jsonl");
    testutil::write_file(path,
        R"({"doc_id":"d1","title":"One","text":"first doc"})" "\n"
        R"({"doc_id":"d2","title":"Two","text":"second doc"})" "\n"
        R"({"doc_id":"d3","title":"Three","text":"third doc"})" "\n");
    auto docs = load_corpus(path);
    REQUIRE(docs.size() == 3);
    CHECK(docs[0].doc_id == "d1");
    CHECK(docs[1].title == "Two");
    CHECK(docs[2].text == "third doc");
}

TEST_CASE("load_corpus on an empty file yields an empty sequence") {
    testutil::TempDir tmp;
    auto path = tmp.file("empty.jsonl");
    testutil::write_file(path, "");
    CHECK(load_corpus(path).empty());
}

TEST_CASE("load_corpus reports the offending line") {
    testutil::TempDir tmp;
    auto path = tmp.file("bad.jsonl");
    testutil::write_file(path,
        R"({"doc_id":"d1","title":"One","text":"first"})" "\n"
        R"({"doc_id":"d2","title":"Two"})" "\n");
    CHECK_THROWS_WITH_AS(load_corpus(path), doctest::Contains(":2:"), std::runtime_error);

    testutil::write_file(path,
        R"({"doc_id":"d1","title":"One","text":"first"})" "\n"
        R"({"doc_id":"d1","title":"Dup","text":"again"})" "\n");
    CHECK_THROWS_WITH_AS(load_corpus(path), doctest::Contains("duplicate doc_id"),
                         std::runtime_error);

    testutil::write_file(path, R"({"doc_id":"d1","title":"One","text":"  "})" "\n");
    CHECK_THROWS_AS(load_corpus(path), std::runtime_error);

    CHECK_THROWS_AS(load_corpus(tmp.file("missing.jsonl")), std::runtime_error);
}

TEST_CASE("load_corpus skips blank lines but never drops records") {
    testutil::TempDir tmp;
    auto path = tmp.file("gaps.jsonl");
    testutil::write_file(path,
        R"({"doc_id":"d1","title":"","text":"one"})" "\n"
        "\n"
        R"({"doc_id":"d2","title":"","text":"two"})" "\n");
    CHECK(load_corpus(path).size() == 2);
}

TEST_CASE("load_queries round-trips records") {
    testutil::TempDir tmp;
    auto path = tmp.file("queries.jsonl");
    testutil::write_file(path,
        R"({"query_id":"q1","question":"Who?","dataset_id":"nq","hop_type":"single_hop","gold_answers":["Ada"]})" "\n"
        R"({"query_id":"q2","question":"Which two?","dataset_id":"musique","hop_type":"multi_hop","gold_answers":["Tom","Ray"]})" "\n");
    auto queries = load_queries(path);
    REQUIRE(queries.size() == 2);
    CHECK(queries[0].question == "Who?");
    CHECK(queries[0].hop_type == HopType::single_hop);
    CHECK(queries[1].gold_answers.size() == 2);

    auto again = query_from_json_line(query_to_json_line(queries[1]));
    CHECK(again.query_id == queries[1].query_id);
    CHECK(again.question == queries[1].question);
    CHECK(again.dataset_id == queries[1].dataset_id);
    CHECK(again.hop_type == queries[1].hop_type);
    CHECK(again.gold_answers == queries[1].gold_answers);
}

TEST_CASE("load_queries rejects invariant violations") {
    testutil::TempDir tmp;
    auto path = tmp.file("queries.jsonl");

    testutil::write_file(path,
        R"({"query_id":"q1","question":"Who?","dataset_id":"nq","hop_type":"single_hop","gold_answers":[]})" "\n");
    CHECK_THROWS_WITH_AS(load_queries(path), doctest::Contains("gold_answers"),
                         std::runtime_error);

    testutil::write_file(path,
        R"({"query_id":"q1","question":"A?","dataset_id":"nq","hop_type":"single_hop","gold_answers":["x"]})" "\n"
        R"({"query_id":"q2","question":"B?","dataset_id":"nq","hop_type":"multi_hop","gold_answers":["y"]})" "\n");
    CHECK_THROWS_WITH_AS(load_queries(path), doctest::Contains("mixes hop_type"),
                         std::runtime_error);

    testutil::write_file(path,
        R"({"query_id":"q1","question":"A?","dataset_id":"nq","hop_type":"single_hop","gold_answers":["x"]})" "\n"
        R"({"query_id":"q1","question":"B?","dataset_id":"nq","hop_type":"single_hop","gold_answers":["y"]})" "\n");
    CHECK_THROWS_WITH_AS(load_queries(path), doctest::Contains("duplicate query_id"),
                         std::runtime_error);

    testutil::write_file(path,
        R"({"query_id":"q1","question":"A?","dataset_id":"nq","hop_type":"mid_hop","gold_answers":["x"]})" "\n");
    CHECK_THROWS_AS(load_queries(path), std::runtime_error);
}

TEST_CASE("normalize_answer applies the four rules") {
    CHECK(normalize_answer("The Google.") == "google");
    CHECK(normalize_answer("") == "");
    CHECK(normalize_answer("An  Apple a Day") == "apple day");
    CHECK(normalize_answer("Sebastian Cabot") == "sebastian cabot");
    CHECK(normalize_answer("it's a THE the an") == "its");
    CHECK(normalize_answer("  spaced\tout\n") == "spaced out");
    // articles are whole tokens only
    CHECK(normalize_answer("another theme") == "another theme");
}

TEST_CASE("normalize_answer is idempotent on random strings") {
    std::mt19937 rng(7);
    const std::string alphabet = "abcXYZ .,'!-()the an0123";
    for (int i = 0; i < 500; ++i) {
        std::string s;
        int len = static_cast<int>(rng() % 40);
        for (int j = 0; j < len; ++j) s.push_back(alphabet[rng() % alphabet.size()]);
        std::string once = normalize_answer(s);
        CHECK(normalize_answer(once) == once);
    }
}
