#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "arag/corpus.hpp"

namespace arag {

struct TokenizerConfig {
    bool stem = false;              // Porter stemmer
    bool remove_stopwords = false;  // small fixed English list
};

/// Lowercase alphanumeric terms split on non-alphanumeric boundaries.
/// Bytes >= 0x80 are kept verbatim so multi-byte UTF-8 words survive.
std::vector<std::string> tokenize(const std::string& text,
                                  const TokenizerConfig& config = {});

/// Porter (1980) stemming of a single lowercase term.
std::string porter_stem(const std::string& term);

bool is_stopword(const std::string& term);

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
};

struct Posting {
    std::uint32_t doc_ordinal = 0;
    std::uint32_t term_frequency = 0;
};

struct ScoredDoc {
    std::string doc_id;
    double score = 0.0;
    std::size_t rank = 0;  // 1-based
};

class InvertedIndex {
public:
    InvertedIndex() = default;

    /// Builds postings over the documents in order; ordinal i refers to
    /// docs[i]. Throws on duplicate doc_id.
    static InvertedIndex build(const std::vector<Document>& docs,
                               Bm25Params params = {},
                               TokenizerConfig tok = {});

    /// Okapi BM25 with the plus-one idf form:
    ///   sum_t ln(1 + (N - df + 0.5)/(df + 0.5)) * tf*(k1+1) / (tf + k1*(1 - b + b*dl/avgdl))
    /// Query terms are scored with multiplicity; terms absent from the
    /// document contribute 0. Throws on an out-of-range ordinal.
    double bm25_score(const std::vector<std::string>& query_terms,
                      std::size_t doc_ordinal) const;

    /// Top-k documents with score > 0, ordered by (score desc, ordinal asc),
    /// ranks 1..n. An empty result is valid.
    std::vector<ScoredDoc> retrieve(const std::string& query, std::size_t k) const;

    const CorpusStats& stats() const { return stats_; }
    const Bm25Params& params() const { return params_; }
    const TokenizerConfig& tokenizer() const { return tok_; }
    const std::vector<std::string>& doc_ids() const { return doc_ids_; }
    const std::vector<std::uint32_t>& doc_lengths() const { return doc_lengths_; }
    const std::map<std::string, std::vector<Posting>>& postings() const { return postings_; }

    void save(const std::string& path) const;
    static InvertedIndex load(const std::string& path);

private:
    std::map<std::string, std::vector<Posting>> postings_;
    std::vector<std::uint32_t> doc_lengths_;
    std::vector<std::string> doc_ids_;
    CorpusStats stats_;
    Bm25Params params_;
    TokenizerConfig tok_;
};

/// Retrieval surface the strategies run against; lets tests substitute
/// counting/recording doubles for the real index.
class Retriever {
public:
    virtual ~Retriever() = default;
    virtual std::vector<ScoredDoc> retrieve(const std::string& query, std::size_t k) const = 0;
    virtual const Document* find_document(const std::string& doc_id) const = 0;
};

/// Index-backed retriever over an in-memory corpus. The documents must be
/// the ones the index was built from, in the same order.
class Bm25Retriever : public Retriever {
public:
    Bm25Retriever(const InvertedIndex& index, const std::vector<Document>& docs);

    std::vector<ScoredDoc> retrieve(const std::string& query, std::size_t k) const override;
    const Document* find_document(const std::string& doc_id) const override;

private:
    const InvertedIndex* index_;
    const std::vector<Document>* docs_;
    std::map<std::string, std::size_t> by_id_;
};

}  // namespace arag
