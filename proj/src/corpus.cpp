#include "arag/corpus.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

using nlohmann::json;

namespace arag {

std::string to_string(HopType h) {
    return h == HopType::single_hop ? "single_hop" : "multi_hop";
}

HopType hop_type_from_string(const std::string& s) {
    if (s == "single_hop") return HopType::single_hop;
    if (s == "multi_hop") return HopType::multi_hop;
    throw std::runtime_error("unknown hop_type: \"" + s + "\"");
}

namespace {

bool is_blank(const std::string& line) {
    for (char c : line)
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    return true;
}

std::string trimmed(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void line_error(const std::string& path, std::size_t lineno, const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + what);
}

json parse_line(const std::string& path, std::size_t lineno, const std::string& line) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        line_error(path, lineno, "malformed JSON object");
    return j;
}

std::string require_string(const json& j, const char* key,
                           const std::string& path, std::size_t lineno) {
    if (!j.contains(key) || !j.at(key).is_string())
        line_error(path, lineno, std::string("missing or non-string key \"") + key + "\"");
    return j.at(key).get<std::string>();
}

}  // namespace

std::vector<Document> load_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open corpus file: " + path);

    std::vector<Document> docs;
    std::unordered_set<std::string> seen_ids;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (is_blank(line)) continue;
        json j = parse_line(path, lineno, line);
        Document d;
        d.doc_id = require_string(j, "doc_id", path, lineno);
        d.title = require_string(j, "title", path, lineno);
        d.text = require_string(j, "text", path, lineno);
        if (trimmed(d.text).empty())
            line_error(path, lineno, "document text is empty");
        if (!seen_ids.insert(d.doc_id).second)
            line_error(path, lineno, "duplicate doc_id \"" + d.doc_id + "\"");
        docs.push_back(std::move(d));
    }
    if (in.bad()) throw std::runtime_error("I/O error while reading " + path);
    return docs;
}

std::vector<QueryRecord> load_queries(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open query file: " + path);

    std::vector<QueryRecord> queries;
    std::unordered_set<std::string> seen_ids;
    std::unordered_map<std::string, HopType> dataset_hop;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (is_blank(line)) continue;
        json j = parse_line(path, lineno, line);
        QueryRecord q;
        q.query_id = require_string(j, "query_id", path, lineno);
        q.question = require_string(j, "question", path, lineno);
        q.dataset_id = require_string(j, "dataset_id", path, lineno);
        try {
            q.hop_type = hop_type_from_string(require_string(j, "hop_type", path, lineno));
        } catch (const std::runtime_error& e) {
            line_error(path, lineno, e.what());
        }
        if (!j.contains("gold_answers") || !j.at("gold_answers").is_array())
            line_error(path, lineno, "missing or non-array key \"gold_answers\"");
        for (const auto& g : j.at("gold_answers")) {
            if (!g.is_string())
                line_error(path, lineno, "gold_answers must contain strings");
            q.gold_answers.push_back(g.get<std::string>());
        }
        if (q.gold_answers.empty())
            line_error(path, lineno, "gold_answers is empty");
        if (!seen_ids.insert(q.query_id).second)
            line_error(path, lineno, "duplicate query_id \"" + q.query_id + "\"");
        auto [it, inserted] = dataset_hop.emplace(q.dataset_id, q.hop_type);
        if (!inserted && it->second != q.hop_type)
            line_error(path, lineno, "dataset \"" + q.dataset_id + "\" mixes hop_type values");
        queries.push_back(std::move(q));
    }
    if (in.bad()) throw std::runtime_error("I/O error while reading " + path);
    return queries;
}

std::string query_to_json_line(const QueryRecord& q) {
    json j;
    j["query_id"] = q.query_id;
    j["question"] = q.question;
    j["dataset_id"] = q.dataset_id;
    j["hop_type"] = to_string(q.hop_type);
    j["gold_answers"] = q.gold_answers;
    return j.dump();
}

QueryRecord query_from_json_line(const std::string& line) {
    json j = json::parse(line);
    QueryRecord q;
    q.query_id = j.at("query_id").get<std::string>();
    q.question = j.at("question").get<std::string>();
    q.dataset_id = j.at("dataset_id").get<std::string>();
    q.hop_type = hop_type_from_string(j.at("hop_type").get<std::string>());
    q.gold_answers = j.at("gold_answers").get<std::vector<std::string>>();
    return q;
}

std::string document_to_json_line(const Document& d) {
    json j;
    j["doc_id"] = d.doc_id;
    j["title"] = d.title;
    j["text"] = d.text;
    return j.dump();
}

std::string normalize_answer(const std::string& text) {
    // lowercase + strip ASCII punctuation in one pass
    std::string depunct;
    depunct.reserve(text.size());
    for (unsigned char c : text) {
        if (std::ispunct(c)) continue;
        depunct.push_back(static_cast<char>(std::tolower(c)));
    }
    // drop article tokens, collapse whitespace
    std::istringstream ss(depunct);
    std::string tok, out;
    while (ss >> tok) {
        if (tok == "a" || tok == "an" || tok == "the") continue;
        if (!out.empty()) out.push_back(' ');
        out += tok;
    }
    return out;
}

}  // namespace arag
