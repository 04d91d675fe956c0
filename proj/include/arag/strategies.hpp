#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "arag/classifier.hpp"
#include "arag/corpus.hpp"
#include "arag/llm.hpp"
#include "arag/retriever.hpp"

namespace arag {

enum class StrategyKind { NoRetrieval, SingleStep, MultiStep };

std::string to_string(StrategyKind k);
StrategyKind strategy_from_string(const std::string& s);

/// A ↔ NoRetrieval, B ↔ SingleStep, C ↔ MultiStep.
StrategyKind strategy_for_label(ComplexityLabel label);

struct ReasoningStep {
    std::vector<std::string> retrieved_doc_ids;
    std::string intermediate_text;
};

/// Per-step documents and outcomes, in execution order.
struct ReasoningContext {
    std::vector<ReasoningStep> steps;
};

struct StrategyResult {
    std::string query_id;
    StrategyKind strategy = StrategyKind::NoRetrieval;
    std::optional<std::string> answer;
    int steps = 0;  // retrieval-and-generate rounds
    double elapsed = 0.0;  // seconds
    ReasoningContext context;
    std::vector<std::string> raw_generations;
};

struct GenerationParams {
    int max_new_tokens = 256;
    double temperature = 0.0;
    std::vector<std::string> stop_sequences;
};

struct StrategyConfig {
    std::size_t top_k = 3;  // documents per retrieval step
    int max_steps = 5;
    /// When set, the step-i retrieval query carries every prior intermediate
    /// sentence instead of only the latest one.
    bool full_chain_retrieval = false;
    GenerationParams generation;
    PromptTemplates templates = PromptTemplates::defaults();
};

struct StrategyDeps {
    const Retriever* retriever = nullptr;
    GeneratorBackend* backend = nullptr;
    StrategyConfig config;
};

/// Backend failure wrapped with the query and whatever context had been
/// accumulated before the failure.
class StrategyError : public std::runtime_error {
public:
    StrategyError(const std::string& query_id, const std::string& what,
                  ReasoningContext partial)
        : std::runtime_error("query " + query_id + ": " + what),
          query_id_(query_id),
          partial_context_(std::move(partial)) {}

    const std::string& query_id() const { return query_id_; }
    const ReasoningContext& partial_context() const { return partial_context_; }

private:
    std::string query_id_;
    ReasoningContext partial_context_;
};

/// One generation, zero retrievals.
StrategyResult run_no_retrieval(const QueryRecord& q, StrategyDeps& deps);

/// One retrieval with the raw question, one generation. Empty retrieval is
/// not an error; the prompt carries a no-documents marker.
StrategyResult run_single_step(const QueryRecord& q, StrategyDeps& deps);

/// Interleaved retrieve-and-generate loop: the step-i retrieval query is the
/// question plus the latest intermediate text, the prompt carries the
/// deduplicated union of documents retrieved so far plus all prior
/// intermediates. Terminates on an extracted answer or at max_steps.
StrategyResult run_multi_step(const QueryRecord& q, StrategyDeps& deps);

/// Dispatches by the label ↔ strategy bijection.
StrategyResult run_with_label(const QueryRecord& q, ComplexityLabel label, StrategyDeps& deps);

std::string result_to_json_line(const StrategyResult& r);
StrategyResult result_from_json_line(const std::string& line);

void save_trace(const std::string& path, const std::vector<StrategyResult>& results);
std::vector<StrategyResult> load_trace(const std::string& path);

}  // namespace arag
