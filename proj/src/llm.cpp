#include "arag/llm.hpp"

#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "httplib.h"
#include "json.hpp"

using nlohmann::json;

namespace arag {

namespace {

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
    std::size_t pos = 0;
    while ((pos = s.find(from, pos)) != std::string::npos) {
        s.replace(pos, from.size(), to);
        pos += to.size();
    }
    return s;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open prompt template: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

constexpr const char* kDefaultNoRetrieval =
    "Answer the question below from what you already know.\n"
    "Give a short reasoning, then end with the final answer after the phrase So the answer is:\n"
    "\n"
    "Question: {question}\n"
    "Direct answer:";

constexpr const char* kDefaultSingleStep =
    "Read the documents, then answer the question.\n"
    "Give a short reasoning, then end with the final answer after the phrase So the answer is:\n"
    "\n"
    "{documents}\n"
    "\n"
    "Question: {question}\n"
    "Grounded answer:";

constexpr const char* kDefaultMultiStep =
    "Read the documents and the reasoning so far, then write the next reasoning step.\n"
    "When the answer is known, end with the final answer after the phrase So the answer is:\n"
    "\n"
    "{documents}\n"
    "\n"
    "Reasoning so far:{chain}\n"
    "\n"
    "Question: {question}\n"
    "Next thought:";

std::string render_documents(const std::vector<Document>& docs) {
    if (docs.empty()) return "(no documents found)";
    std::ostringstream out;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        if (i > 0) out << "\n\n";
        out << "Document [" << (i + 1) << "] " << escape_cue(docs[i].title) << "\n"
            << escape_cue(docs[i].text);
    }
    return out.str();
}

std::string render_chain(const std::vector<std::string>& prior_steps) {
    std::string out;
    for (const auto& step : prior_steps) {
        out.push_back(' ');
        out += escape_cue(step);
    }
    return out;
}

}  // namespace

const std::string& answer_cue() {
    static const std::string cue = "So the answer is:";
    return cue;
}

std::optional<std::string> extract_answer(const std::string& generation) {
    const std::string& cue = answer_cue();
    std::size_t pos = generation.rfind(cue);
    if (pos == std::string::npos) return std::nullopt;
    std::string ans = generation.substr(pos + cue.size());
    auto trim = [](std::string& s) {
        std::size_t b = s.find_first_not_of(" \t\r\n");
        std::size_t e = s.find_last_not_of(" \t\r\n");
        s = (b == std::string::npos) ? "" : s.substr(b, e - b + 1);
    };
    trim(ans);
    if (!ans.empty() && ans.back() == '.') ans.pop_back();
    trim(ans);
    return ans;
}

std::string escape_cue(const std::string& text) {
    const std::string& cue = answer_cue();
    std::string escaped = cue.substr(0, cue.size() - 1) + "\\:";
    return replace_all(text, cue, escaped);
}

PromptTemplates PromptTemplates::defaults() {
    return {kDefaultNoRetrieval, kDefaultSingleStep, kDefaultMultiStep};
}

PromptTemplates PromptTemplates::from_files(const std::string& no_retrieval_path,
                                            const std::string& single_step_path,
                                            const std::string& multi_step_path) {
    PromptTemplates tpl = defaults();
    if (!no_retrieval_path.empty()) tpl.no_retrieval = read_file(no_retrieval_path);
    if (!single_step_path.empty()) tpl.single_step = read_file(single_step_path);
    if (!multi_step_path.empty()) tpl.multi_step = read_file(multi_step_path);
    return tpl;
}

std::string build_prompt_no_retrieval(const QueryRecord& q, const PromptTemplates& tpl) {
    if (q.question.empty()) throw std::invalid_argument("question is empty");
    return replace_all(tpl.no_retrieval, "{question}", q.question);
}

std::string build_prompt_single(const QueryRecord& q, const std::vector<Document>& docs,
                                const PromptTemplates& tpl) {
    if (docs.empty()) throw std::invalid_argument("build_prompt_single requires documents");
    std::string s = replace_all(tpl.single_step, "{documents}", render_documents(docs));
    return replace_all(s, "{question}", q.question);
}

std::string build_prompt_single_no_docs(const QueryRecord& q, const PromptTemplates& tpl) {
    std::string s = replace_all(tpl.single_step, "{documents}", render_documents({}));
    return replace_all(s, "{question}", q.question);
}

std::string build_prompt_multistep(const QueryRecord& q, const std::vector<Document>& docs,
                                   const std::vector<std::string>& prior_steps,
                                   const PromptTemplates& tpl) {
    std::string s = replace_all(tpl.multi_step, "{documents}", render_documents(docs));
    s = replace_all(s, "{chain}", render_chain(prior_steps));
    return replace_all(s, "{question}", q.question);
}

void MockBackend::add(std::string pattern, std::string response) {
    entries_.emplace_back(std::move(pattern), std::move(response));
}

MockBackend MockBackend::from_script(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open mock script: " + path);
    MockBackend mock;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("pattern") || !j.contains("response"))
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected {\"pattern\", \"response\"}");
        mock.add(j.at("pattern").get<std::string>(), j.at("response").get<std::string>());
    }
    return mock;
}

std::string MockBackend::complete(const GenerationRequest& req) {
    for (const auto& [pattern, response] : entries_) {
        if (pattern.empty() || req.prompt.find(pattern) != std::string::npos)
            return response;
    }
    throw std::runtime_error("mock backend: no pattern matches the prompt and no default entry");
}

// --- remote backend ---

struct RemoteBackend::Impl {
    RemoteBackendConfig config;
    std::string host_part;    // scheme://host:port
    std::string path_prefix;  // e.g. /v1
    std::string api_key;

    std::mutex mtx;
    std::condition_variable cv;
    int in_flight = 0;

    explicit Impl(RemoteBackendConfig cfg) : config(std::move(cfg)) {
        const std::string& url = config.base_url;
        if (url.rfind("https://", 0) == 0)
            throw std::runtime_error("remote backend: https base URLs are not supported "
                                     "in this build, use http");
        if (url.rfind("http://", 0) != 0)
            throw std::runtime_error("remote backend: base_url must start with http://");
        std::size_t path_pos = url.find('/', 7);
        if (path_pos == std::string::npos) {
            host_part = url;
        } else {
            host_part = url.substr(0, path_pos);
            path_prefix = url.substr(path_pos);
            while (!path_prefix.empty() && path_prefix.back() == '/') path_prefix.pop_back();
        }
        if (const char* key = std::getenv(config.api_key_env.c_str())) api_key = key;
    }

    struct Slot {
        Impl& impl;
        explicit Slot(Impl& i) : impl(i) {
            std::unique_lock lock(impl.mtx);
            impl.cv.wait(lock, [&] { return impl.in_flight < impl.config.max_in_flight; });
            ++impl.in_flight;
        }
        ~Slot() {
            {
                std::lock_guard lock(impl.mtx);
                --impl.in_flight;
            }
            impl.cv.notify_one();
        }
    };
};

RemoteBackend::RemoteBackend(RemoteBackendConfig config)
    : impl_(std::make_unique<Impl>(std::move(config))) {}

RemoteBackend::~RemoteBackend() = default;

std::string RemoteBackend::id() const {
    return "remote:" + impl_->config.model;
}

std::string RemoteBackend::complete(const GenerationRequest& req) {
    Impl::Slot slot(*impl_);

    json body;
    body["model"] = impl_->config.model;
    body["prompt"] = req.prompt;
    body["max_tokens"] = req.max_new_tokens;
    body["temperature"] = req.temperature;
    body["stop"] = req.stop_sequences;
    const std::string payload = body.dump();
    const std::string path = impl_->path_prefix + "/completions";

    auto timeout = std::chrono::duration<double>(impl_->config.timeout_seconds);
    auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
    auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout - secs);

    std::string last_error;
    for (int attempt = 0; attempt <= impl_->config.max_retries; ++attempt) {
        httplib::Client client(impl_->host_part);
        client.set_connection_timeout(secs.count(), usecs.count());
        client.set_read_timeout(secs.count(), usecs.count());
        client.set_write_timeout(secs.count(), usecs.count());
        httplib::Headers headers;
        if (!impl_->api_key.empty())
            headers.emplace("Authorization", "Bearer " + impl_->api_key);

        auto res = client.Post(path, headers, payload, "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 429 || res->status >= 500) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status < 200 || res->status >= 300)
            throw std::runtime_error("remote backend: HTTP " + std::to_string(res->status) +
                                     " from " + path);
        json parsed = json::parse(res->body, nullptr, false);
        if (parsed.is_discarded() || !parsed.contains("choices") || parsed["choices"].empty() ||
            !parsed["choices"][0].contains("text"))
            throw std::runtime_error("remote backend: malformed completions response");
        return parsed["choices"][0]["text"].get<std::string>();
    }
    throw std::runtime_error("remote backend: giving up after " +
                             std::to_string(impl_->config.max_retries + 1) + " attempts (" +
                             last_error + ")");
}

GenerationResponse generate(GeneratorBackend& backend, const GenerationRequest& req) {
    if (req.prompt.empty()) throw std::invalid_argument("generation prompt is empty");
    auto start = std::chrono::steady_clock::now();
    std::string text = backend.complete(req);
    auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);

    std::size_t cut = std::string::npos;
    for (const auto& stop : req.stop_sequences) {
        if (stop.empty()) continue;
        std::size_t pos = text.find(stop);
        if (pos != std::string::npos && pos < cut) cut = pos;
    }
    if (cut != std::string::npos) text.resize(cut);

    GenerationResponse resp;
    resp.text = std::move(text);
    resp.latency = elapsed.count();
    resp.backend_id = backend.id();
    return resp;
}

}  // namespace arag
