#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "arag/corpus.hpp"

namespace arag {

struct GenerationRequest {
    std::string prompt;
    int max_new_tokens = 256;
    double temperature = 0.0;
    std::vector<std::string> stop_sequences;
};

struct GenerationResponse {
    std::string text;
    double latency = 0.0;  // seconds
    std::string backend_id;
};

/// Text-generation transport. complete() returns the raw backend text;
/// generate() below layers stop-sequence truncation and latency accounting
/// on top.
class GeneratorBackend {
public:
    virtual ~GeneratorBackend() = default;
    virtual std::string complete(const GenerationRequest& req) = 0;
    virtual std::string id() const = 0;
};

/// Deterministic scripted backend. Entries are tried in insertion order and
/// the first whose pattern is a substring of the prompt wins; an empty
/// pattern matches every prompt, so an empty-pattern entry at the end acts
/// as the default. No match and no default is an error.
class MockBackend : public GeneratorBackend {
public:
    MockBackend() = default;

    void add(std::string pattern, std::string response);

    /// Loads a JSONL script of {"pattern": ..., "response": ...} lines.
    static MockBackend from_script(const std::string& path);

    std::string complete(const GenerationRequest& req) override;
    std::string id() const override { return "mock"; }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

struct RemoteBackendConfig {
    std::string base_url;  // e.g. http://localhost:8080/v1
    std::string model;
    std::string api_key_env = "ARAG_API_KEY";
    double timeout_seconds = 30.0;
    int max_retries = 2;        // additional attempts after the first
    int max_in_flight = 4;
};

/// OpenAI-compatible completions client: POST <base_url>/completions with
/// {model, prompt, max_tokens, temperature, stop}, answer read from
/// choices[0].text. Retries transport errors, 429 and 5xx with no backoff
/// (bounded by max_retries); other HTTP failures surface immediately.
class RemoteBackend : public GeneratorBackend {
public:
    explicit RemoteBackend(RemoteBackendConfig config);
    ~RemoteBackend() override;

    std::string complete(const GenerationRequest& req) override;
    std::string id() const override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// The literal marker whose suffix is the final answer.
const std::string& answer_cue();

/// Returns the text after the LAST occurrence of the answer cue, trimmed of
/// surrounding whitespace and one trailing period; nullopt when the cue is
/// absent.
std::optional<std::string> extract_answer(const std::string& generation);

/// Document/chain text is embedded with the cue escaped ("is\:") so the cue
/// can never be matched inside quoted material.
std::string escape_cue(const std::string& text);

struct PromptTemplates {
    std::string no_retrieval;
    std::string single_step;
    std::string multi_step;

    static PromptTemplates defaults();
    /// Any empty path keeps the built-in default for that template.
    static PromptTemplates from_files(const std::string& no_retrieval_path,
                                      const std::string& single_step_path,
                                      const std::string& multi_step_path);
};

std::string build_prompt_no_retrieval(const QueryRecord& q, const PromptTemplates& tpl);

/// docs in rank order; throws on an empty list.
std::string build_prompt_single(const QueryRecord& q, const std::vector<Document>& docs,
                                const PromptTemplates& tpl);

/// Degenerate-retrieval variant: the single-step template rendered with the
/// "(no documents found)" marker in place of documents.
std::string build_prompt_single_no_docs(const QueryRecord& q, const PromptTemplates& tpl);

/// docs accumulated over the steps so far; prior_steps are the intermediate
/// generations in step order.
std::string build_prompt_multistep(const QueryRecord& q, const std::vector<Document>& docs,
                                   const std::vector<std::string>& prior_steps,
                                   const PromptTemplates& tpl);

/// Calls the backend, truncates at the earliest stop-sequence occurrence and
/// records wall-clock latency.
GenerationResponse generate(GeneratorBackend& backend, const GenerationRequest& req);

}  // namespace arag
