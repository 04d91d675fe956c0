#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "arag/classifier.hpp"
#include "arag/corpus.hpp"

namespace arag {

/// Which of the three strategies answered a query correctly, judged by the
/// configured gating metric.
struct OutcomeTriple {
    std::string query_id;
    bool correct_no_retrieval = false;
    bool correct_single = false;
    bool correct_multi = false;
};

enum class LabelProvenance { silver_outcome, inductive_bias };
enum class LabelingMode { full, silver_only, bias_only };

std::string to_string(LabelProvenance p);
std::string to_string(LabelingMode m);
LabelingMode labeling_mode_from_string(const std::string& s);

struct LabeledQuery {
    std::string query_id;
    ComplexityLabel label = ComplexityLabel::A;
    LabelProvenance provenance = LabelProvenance::silver_outcome;
};

/// Outcome-based silver label with simpler-strategy priority: A if the
/// no-retrieval answer was correct, else B if single-step was, else C if
/// multi-step was; nullopt when every strategy failed.
std::optional<ComplexityLabel> label_by_outcome(const OutcomeTriple& t);

/// Dataset-bias fallback: B for single-hop datasets, C for multi-hop. Never A.
ComplexityLabel label_by_bias(const QueryRecord& q);

/// Labels the queries in input order. full: silver where defined, else bias;
/// silver_only: drop queries with no silver label; bias_only: bias for all.
/// Throws if a triple references an unknown query_id.
std::vector<LabeledQuery> build_training_set(
    const std::vector<QueryRecord>& queries,
    const std::map<std::string, OutcomeTriple>& triples, LabelingMode mode);

struct TrainingSetHeader {
    LabelingMode mode = LabelingMode::full;
    std::string gating_metric;  // "em" or "acc"
    std::uint64_t seed = 0;
};

/// JSONL file: one header line, then one LabeledQuery per line.
void save_training_set(const std::string& path, const TrainingSetHeader& header,
                       const std::vector<LabeledQuery>& labels);
std::pair<TrainingSetHeader, std::vector<LabeledQuery>> load_training_set(const std::string& path);

void save_triples(const std::string& path, const std::vector<OutcomeTriple>& triples);
std::vector<OutcomeTriple> load_triples(const std::string& path);

}  // namespace arag
