#pragma once

// Brute-force BM25 reference used by the retriever tests and the acceptance
// suite. Works from the raw document texts only: recomputes tokenization,
// term/document frequencies, lengths and the scoring formula independently
// of the inverted index.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "arag/corpus.hpp"
#include "arag/retriever.hpp"

namespace testutil {

struct OracleHit {
    std::string doc_id;
    double score;
    std::size_t rank;
};

inline std::vector<OracleHit> bm25_brute_force(const std::vector<arag::Document>& docs,
                                               const std::string& query, std::size_t k,
                                               const arag::Bm25Params& params = {}) {
    using arag::tokenize;
    std::vector<std::vector<std::string>> doc_terms;
    doc_terms.reserve(docs.size());
    double total_len = 0.0;
    for (const auto& d : docs) {
        doc_terms.push_back(tokenize(d.text));
        total_len += static_cast<double>(doc_terms.back().size());
    }
    double avgdl = docs.empty() ? 0.0 : total_len / static_cast<double>(docs.size());
    double num_docs = static_cast<double>(docs.size());

    auto query_terms = tokenize(query);

    // document frequency per query term
    std::map<std::string, double> df;
    for (const auto& t : query_terms) {
        if (df.count(t)) continue;
        double n = 0.0;
        for (const auto& terms : doc_terms)
            if (std::find(terms.begin(), terms.end(), t) != terms.end()) n += 1.0;
        df[t] = n;
    }

    std::vector<std::pair<double, std::size_t>> scored;
    for (std::size_t ord = 0; ord < docs.size(); ++ord) {
        double dl = static_cast<double>(doc_terms[ord].size());
        double score = 0.0;
        for (const auto& t : query_terms) {
            double tf = static_cast<double>(
                std::count(doc_terms[ord].begin(), doc_terms[ord].end(), t));
            if (tf == 0.0) continue;
            double idf = std::log(1.0 + (num_docs - df[t] + 0.5) / (df[t] + 0.5));
            double ratio = avgdl > 0.0 ? dl / avgdl : 0.0;
            score += idf * (tf * (params.k1 + 1.0) /
                            (tf + params.k1 * (1.0 - params.b + params.b * ratio)));
        }
        if (score > 0.0) scored.push_back({score, ord});
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    if (scored.size() > k) scored.resize(k);

    std::vector<OracleHit> out;
    for (std::size_t i = 0; i < scored.size(); ++i)
        out.push_back({docs[scored[i].second].doc_id, scored[i].first, i + 1});
    return out;
}

}  // namespace testutil
