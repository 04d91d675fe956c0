#pragma once

#include <string>
#include <vector>

namespace arag {

/// One retrievable text unit of the external knowledge source.
struct Document {
    std::string doc_id;
    std::string title;
    std::string text;
};

enum class HopType { single_hop, multi_hop };

std::string to_string(HopType h);
HopType hop_type_from_string(const std::string& s);

/// A question with its gold answers and dataset provenance.
struct QueryRecord {
    std::string query_id;
    std::string question;
    std::string dataset_id;
    HopType hop_type = HopType::single_hop;
    std::vector<std::string> gold_answers;
};

struct CorpusStats {
    std::size_t doc_count = 0;
    double avg_doc_len = 0.0;  // tokens per document
};

/// Loads a JSONL corpus file, one {doc_id, title, text} object per line.
/// Blank lines are skipped. Throws std::runtime_error naming the offending
/// line on malformed JSON, missing keys, empty text, or duplicate doc_id.
std::vector<Document> load_corpus(const std::string& path);

/// Loads a JSONL query file, one {query_id, question, dataset_id, hop_type,
/// gold_answers} object per line. Enforces non-empty gold_answers, unique
/// query_id, and a consistent hop_type per dataset_id.
std::vector<QueryRecord> load_queries(const std::string& path);

std::string query_to_json_line(const QueryRecord& q);
QueryRecord query_from_json_line(const std::string& line);

std::string document_to_json_line(const Document& d);

/// Canonical answer normalization used by every metric and label gate:
/// lowercase, strip punctuation, drop the articles "a"/"an"/"the" as whole
/// tokens, collapse whitespace. Idempotent.
std::string normalize_answer(const std::string& text);

}  // namespace arag
