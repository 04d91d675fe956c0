#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "arag/corpus.hpp"
#include "arag/labeler.hpp"
#include "arag/strategies.hpp"

namespace arag {

struct MetricRow {
    double em = 0.0;
    double f1 = 0.0;
    double acc = 0.0;
    double avg_steps = 0.0;
    double avg_time = 0.0;  // seconds per query
    std::optional<double> rel_time;  // vs the single-step baseline, when known
};

/// counts[true label][predicted label]
struct ConfusionMatrix {
    std::array<std::array<std::int64_t, 3>, 3> counts{};

    std::int64_t total() const;
    std::int64_t row_sum(int true_label) const;
};

/// 1 iff the normalized prediction equals some normalized gold.
int exact_match(const std::string& pred, const std::vector<std::string>& golds);

/// Best token-overlap F1 over the golds, on normalized token multisets.
/// Both sides empty after normalization count as 1, one side empty as 0.
double token_f1(const std::string& pred, const std::vector<std::string>& golds);

/// 1 iff some normalized gold is a substring of the normalized prediction.
/// An empty normalized prediction matches only an empty normalized gold,
/// keeping exact_match = 1 ⇒ accuracy_contains = 1.
int accuracy_contains(const std::string& pred, const std::vector<std::string>& golds);

/// Unweighted means over the results; a missing answer scores 0 on all three
/// effectiveness metrics. Throws when a result's query is absent.
MetricRow aggregate(const std::vector<StrategyResult>& results,
                    const std::map<std::string, QueryRecord>& queries,
                    std::optional<double> single_step_avg_time = std::nullopt);

struct ClassifierReport {
    double overall_accuracy = 0.0;
    std::array<double, 3> per_class_accuracy{};  // recall per true label
    ConfusionMatrix confusion;
};

/// preds and reference must cover the same query_id set.
ClassifierReport classifier_report(
    const std::vector<std::pair<std::string, ComplexityLabel>>& preds,
    const std::vector<LabeledQuery>& reference);

/// Ideal-router run: dispatch with the outcome label when defined, else the
/// bias label.
StrategyResult oracle_route(const QueryRecord& q, const OutcomeTriple& triple,
                            StrategyDeps& deps);

}  // namespace arag
