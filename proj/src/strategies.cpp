#include "arag/strategies.hpp"

#include <chrono>
#include <fstream>
#include <unordered_set>

#include "json.hpp"

using nlohmann::json;

namespace arag {

std::string to_string(StrategyKind k) {
    switch (k) {
        case StrategyKind::NoRetrieval: return "no_retrieval";
        case StrategyKind::SingleStep: return "single_step";
        case StrategyKind::MultiStep: return "multi_step";
    }
    return "no_retrieval";
}

StrategyKind strategy_from_string(const std::string& s) {
    if (s == "no_retrieval") return StrategyKind::NoRetrieval;
    if (s == "single_step") return StrategyKind::SingleStep;
    if (s == "multi_step") return StrategyKind::MultiStep;
    throw std::runtime_error("unknown strategy: \"" + s + "\"");
}

StrategyKind strategy_for_label(ComplexityLabel label) {
    switch (label) {
        case ComplexityLabel::A: return StrategyKind::NoRetrieval;
        case ComplexityLabel::B: return StrategyKind::SingleStep;
        case ComplexityLabel::C: return StrategyKind::MultiStep;
    }
    return StrategyKind::NoRetrieval;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

GenerationRequest make_request(const StrategyConfig& cfg, std::string prompt) {
    GenerationRequest req;
    req.prompt = std::move(prompt);
    req.max_new_tokens = cfg.generation.max_new_tokens;
    req.temperature = cfg.generation.temperature;
    req.stop_sequences = cfg.generation.stop_sequences;
    return req;
}

std::vector<Document> resolve(const Retriever& retriever, const std::vector<ScoredDoc>& hits) {
    std::vector<Document> docs;
    docs.reserve(hits.size());
    for (const auto& h : hits) {
        const Document* d = retriever.find_document(h.doc_id);
        if (!d) throw std::runtime_error("retrieved doc_id \"" + h.doc_id + "\" not in corpus");
        docs.push_back(*d);
    }
    return docs;
}

std::vector<std::string> ids_of(const std::vector<ScoredDoc>& hits) {
    std::vector<std::string> ids;
    ids.reserve(hits.size());
    for (const auto& h : hits) ids.push_back(h.doc_id);
    return ids;
}

}  // namespace

StrategyResult run_no_retrieval(const QueryRecord& q, StrategyDeps& deps) {
    auto start = Clock::now();
    StrategyResult res;
    res.query_id = q.query_id;
    res.strategy = StrategyKind::NoRetrieval;
    try {
        auto gen = generate(*deps.backend,
                            make_request(deps.config, build_prompt_no_retrieval(q, deps.config.templates)));
        res.raw_generations.push_back(gen.text);
        res.answer = extract_answer(gen.text);
    } catch (const std::exception& e) {
        throw StrategyError(q.query_id, e.what(), {});
    }
    res.steps = 0;
    res.elapsed = seconds_since(start);
    return res;
}

StrategyResult run_single_step(const QueryRecord& q, StrategyDeps& deps) {
    auto start = Clock::now();
    StrategyResult res;
    res.query_id = q.query_id;
    res.strategy = StrategyKind::SingleStep;
    try {
        auto hits = deps.retriever->retrieve(q.question, deps.config.top_k);
        auto docs = resolve(*deps.retriever, hits);
        std::string prompt = docs.empty()
                                 ? build_prompt_single_no_docs(q, deps.config.templates)
                                 : build_prompt_single(q, docs, deps.config.templates);
        auto gen = generate(*deps.backend, make_request(deps.config, prompt));
        res.context.steps.push_back({ids_of(hits), gen.text});
        res.raw_generations.push_back(gen.text);
        res.answer = extract_answer(gen.text);
    } catch (const StrategyError&) {
        throw;
    } catch (const std::exception& e) {
        throw StrategyError(q.query_id, e.what(), res.context);
    }
    res.steps = 1;
    res.elapsed = seconds_since(start);
    return res;
}

StrategyResult run_multi_step(const QueryRecord& q, StrategyDeps& deps) {
    auto start = Clock::now();
    StrategyResult res;
    res.query_id = q.query_id;
    res.strategy = StrategyKind::MultiStep;

    std::vector<Document> accumulated;          // deduplicated union, first-seen order
    std::unordered_set<std::string> seen_ids;
    std::vector<std::string> intermediates;

    try {
        for (int step = 1; step <= deps.config.max_steps; ++step) {
            std::string retrieval_query = q.question;
            if (!intermediates.empty()) {
                if (deps.config.full_chain_retrieval) {
                    for (const auto& s : intermediates) retrieval_query += " " + s;
                } else {
                    retrieval_query += " " + intermediates.back();
                }
            }
            auto hits = deps.retriever->retrieve(retrieval_query, deps.config.top_k);
            for (const auto& d : resolve(*deps.retriever, hits))
                if (seen_ids.insert(d.doc_id).second) accumulated.push_back(d);

            std::string prompt =
                build_prompt_multistep(q, accumulated, intermediates, deps.config.templates);
            auto gen = generate(*deps.backend, make_request(deps.config, prompt));
            res.context.steps.push_back({ids_of(hits), gen.text});
            res.raw_generations.push_back(gen.text);
            res.steps = step;

            if (auto ans = extract_answer(gen.text)) {
                res.answer = ans;
                break;
            }
            intermediates.push_back(gen.text);
        }
    } catch (const std::exception& e) {
        throw StrategyError(q.query_id, e.what(), res.context);
    }
    res.elapsed = seconds_since(start);
    return res;
}

StrategyResult run_with_label(const QueryRecord& q, ComplexityLabel label, StrategyDeps& deps) {
    switch (strategy_for_label(label)) {
        case StrategyKind::NoRetrieval: return run_no_retrieval(q, deps);
        case StrategyKind::SingleStep: return run_single_step(q, deps);
        case StrategyKind::MultiStep: return run_multi_step(q, deps);
    }
    throw std::logic_error("unreachable");
}

std::string result_to_json_line(const StrategyResult& r) {
    json j;
    j["query_id"] = r.query_id;
    j["strategy"] = to_string(r.strategy);
    if (r.answer)
        j["answer"] = *r.answer;
    else
        j["answer"] = nullptr;
    j["steps"] = r.steps;
    j["elapsed"] = r.elapsed;
    json ctx = json::array();
    for (const auto& s : r.context.steps) {
        json step;
        step["doc_ids"] = s.retrieved_doc_ids;
        step["text"] = s.intermediate_text;
        ctx.push_back(std::move(step));
    }
    j["context"] = std::move(ctx);
    j["raw_generations"] = r.raw_generations;
    return j.dump();
}

StrategyResult result_from_json_line(const std::string& line) {
    json j = json::parse(line);
    StrategyResult r;
    r.query_id = j.at("query_id").get<std::string>();
    r.strategy = strategy_from_string(j.at("strategy").get<std::string>());
    if (!j.at("answer").is_null()) r.answer = j.at("answer").get<std::string>();
    r.steps = j.at("steps").get<int>();
    r.elapsed = j.at("elapsed").get<double>();
    for (const auto& step : j.at("context")) {
        ReasoningStep s;
        s.retrieved_doc_ids = step.at("doc_ids").get<std::vector<std::string>>();
        s.intermediate_text = step.at("text").get<std::string>();
        r.context.steps.push_back(std::move(s));
    }
    r.raw_generations = j.at("raw_generations").get<std::vector<std::string>>();
    return r;
}

void save_trace(const std::string& path, const std::vector<StrategyResult>& results) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open trace file for write: " + path);
    for (const auto& r : results) out << result_to_json_line(r) << "\n";
    if (!out) throw std::runtime_error("I/O error while writing " + path);
}

std::vector<StrategyResult> load_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open trace file: " + path);
    std::vector<StrategyResult> results;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            results.push_back(result_from_json_line(line));
        } catch (const std::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return results;
}

}  // namespace arag
