#pragma once

// Scripted end-to-end fixture: 60 queries (20 per true complexity class)
// over a 60-document corpus, with a mock-backend script whose per-strategy
// correctness reproduces a designed OutcomeTriple per query.
//
// Per class:
//   A (single-hop): every strategy answers correctly; multi-step needs 1 step.
//   B (single-hop): 14 queries with (no_retr=F, single=T, multi=T), multi-step
//     resolves at step 2; plus 6 all-false queries (bias label B) where the
//     multi-step loop never emits a cue and runs to the cap.
//   C (multi-hop): 14 queries with (F, F, T) resolving at step 3; plus 6
//     all-false queries (bias label C).
//
// The prompt templates end each question line with a strategy-specific tail
// ("Direct answer:" / "Grounded answer:" / "Next thought:"), so the pattern
// `question + "\n" + tail` keys one (query, strategy) pair; multi-step steps
// are distinguished by the hint sentences accumulated in the chain.

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "arag/corpus.hpp"
#include "arag/labeler.hpp"
#include "test_util.hpp"

#include "json.hpp"

namespace testutil {

struct ScriptedFixture {
    std::vector<arag::Document> docs;
    std::vector<arag::QueryRecord> queries;
    std::map<std::string, arag::OutcomeTriple> designed_triples;
    std::map<std::string, arag::ComplexityLabel> true_labels;  // designed class
    std::map<std::string, int> multi_steps;                    // steps the multi run takes
    std::vector<std::string> mock_lines;

    std::string corpus_path, query_path, mock_path;

    void write(const std::string& dir) {
        corpus_path = dir + "/corpus.jsonl";
        query_path = dir + "/queries.jsonl";
        mock_path = dir + "/mock.jsonl";
        std::ostringstream corpus, queries_out, mock;
        for (const auto& d : docs) corpus << arag::document_to_json_line(d) << "\n";
        for (const auto& q : queries) queries_out << arag::query_to_json_line(q) << "\n";
        for (const auto& l : mock_lines) mock << l << "\n";
        write_file(corpus_path, corpus.str());
        write_file(query_path, queries_out.str());
        write_file(mock_path, mock.str());
    }
};

inline ScriptedFixture make_scripted_fixture(int per_class = 20, int unsolved_per_class = 6,
                                             int max_steps = 5) {
    using arag::ComplexityLabel;
    using arag::HopType;
    ScriptedFixture fx;

    auto mock_entry = [&](const std::string& pattern, const std::string& response) {
        nlohmann::json j;
        j["pattern"] = pattern;
        j["response"] = response;
        fx.mock_lines.push_back(j.dump());
    };

    int next = 0;
    auto pad = [](int n) {
        std::string s = std::to_string(n);
        return s.size() < 2 ? "0" + s : s;
    };

    auto add_query = [&](ComplexityLabel cls, bool solved) {
        std::string id = pad(next);
        std::string topic = "topic" + id;
        std::string question;
        HopType hop;
        switch (cls) {
            case ComplexityLabel::A:
                question = "define " + topic + " plainly";
                hop = HopType::single_hop;
                break;
            case ComplexityLabel::B:
                question = "where is " + topic + " located";
                hop = HopType::single_hop;
                break;
            default:
                question = "which person linked " + topic + " and its twin";
                hop = HopType::multi_hop;
                break;
        }
        std::string gold = "answer " + id;
        fx.docs.push_back({"d" + id, "Notes " + id,
                           topic + " appears in these reference notes with details"});
        fx.queries.push_back({"q" + id, question,
                              hop == HopType::single_hop ? "singlehop_ds" : "multihop_ds", hop,
                              {gold}});

        const std::string correct = "So the answer is: " + gold + ".";
        const std::string wrong = "So the answer is: wrong.";
        const std::string hint1 = "hint one for query" + id;
        const std::string hint2 = "hint two for query" + id;
        const std::string no_tail = question + "\nDirect answer:";
        const std::string single_tail = question + "\nGrounded answer:";
        const std::string multi_tail = question + "\nNext thought:";

        arag::OutcomeTriple t;
        t.query_id = "q" + id;
        if (!solved) {
            t.correct_no_retrieval = t.correct_single = t.correct_multi = false;
            mock_entry(no_tail, wrong);
            mock_entry(single_tail, wrong);
            mock_entry(multi_tail, "still researching " + topic + " nothing conclusive");
            fx.multi_steps[t.query_id] = max_steps;
        } else if (cls == ComplexityLabel::A) {
            t.correct_no_retrieval = t.correct_single = t.correct_multi = true;
            mock_entry(no_tail, "recall: " + correct);
            mock_entry(single_tail, "reading: " + correct);
            mock_entry(multi_tail, "direct: " + correct);
            fx.multi_steps[t.query_id] = 1;
        } else if (cls == ComplexityLabel::B) {
            t.correct_no_retrieval = false;
            t.correct_single = t.correct_multi = true;
            mock_entry(no_tail, wrong);
            mock_entry(single_tail, "grounded: " + correct);
            mock_entry(hint1, "resolved: " + correct);  // step 2: hint1 is in the chain
            mock_entry(multi_tail, hint1);              // step 1
            fx.multi_steps[t.query_id] = 2;
        } else {
            t.correct_no_retrieval = t.correct_single = false;
            t.correct_multi = true;
            mock_entry(no_tail, wrong);
            mock_entry(single_tail, wrong);
            mock_entry(hint2, "combined: " + correct);  // step 3
            mock_entry(hint1, hint2);                   // step 2
            mock_entry(multi_tail, hint1);              // step 1
            fx.multi_steps[t.query_id] = 3;
        }
        fx.designed_triples[t.query_id] = t;
        fx.true_labels[t.query_id] = cls;
        ++next;
    };

    for (ComplexityLabel cls :
         {ComplexityLabel::A, ComplexityLabel::B, ComplexityLabel::C}) {
        int unsolved = cls == ComplexityLabel::A ? 0 : unsolved_per_class;
        for (int i = 0; i < per_class - unsolved; ++i) add_query(cls, true);
        for (int i = 0; i < unsolved; ++i) add_query(cls, false);
    }
    return fx;
}

}  // namespace testutil
