#include "arag/labeler.hpp"

#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include "json.hpp"

using nlohmann::json;

namespace arag {

std::string to_string(LabelProvenance p) {
    return p == LabelProvenance::silver_outcome ? "silver_outcome" : "inductive_bias";
}

std::string to_string(LabelingMode m) {
    switch (m) {
        case LabelingMode::full: return "full";
        case LabelingMode::silver_only: return "silver_only";
        case LabelingMode::bias_only: return "bias_only";
    }
    return "full";
}

LabelingMode labeling_mode_from_string(const std::string& s) {
    if (s == "full") return LabelingMode::full;
    if (s == "silver_only") return LabelingMode::silver_only;
    if (s == "bias_only") return LabelingMode::bias_only;
    throw std::runtime_error("unknown labeling mode: \"" + s + "\"");
}

std::optional<ComplexityLabel> label_by_outcome(const OutcomeTriple& t) {
    if (t.correct_no_retrieval) return ComplexityLabel::A;
    if (t.correct_single) return ComplexityLabel::B;
    if (t.correct_multi) return ComplexityLabel::C;
    return std::nullopt;
}

ComplexityLabel label_by_bias(const QueryRecord& q) {
    return q.hop_type == HopType::single_hop ? ComplexityLabel::B : ComplexityLabel::C;
}

std::vector<LabeledQuery> build_training_set(
    const std::vector<QueryRecord>& queries,
    const std::map<std::string, OutcomeTriple>& triples, LabelingMode mode) {
    std::unordered_set<std::string> known;
    for (const auto& q : queries) known.insert(q.query_id);
    for (const auto& [id, t] : triples)
        if (!known.count(id))
            throw std::runtime_error("outcome triple references unknown query_id \"" + id + "\"");

    std::vector<LabeledQuery> out;
    for (const auto& q : queries) {
        std::optional<ComplexityLabel> silver;
        if (auto it = triples.find(q.query_id); it != triples.end())
            silver = label_by_outcome(it->second);

        switch (mode) {
            case LabelingMode::full:
                if (silver)
                    out.push_back({q.query_id, *silver, LabelProvenance::silver_outcome});
                else
                    out.push_back({q.query_id, label_by_bias(q), LabelProvenance::inductive_bias});
                break;
            case LabelingMode::silver_only:
                if (silver)
                    out.push_back({q.query_id, *silver, LabelProvenance::silver_outcome});
                break;
            case LabelingMode::bias_only:
                out.push_back({q.query_id, label_by_bias(q), LabelProvenance::inductive_bias});
                break;
        }
    }
    return out;
}

void save_training_set(const std::string& path, const TrainingSetHeader& header,
                       const std::vector<LabeledQuery>& labels) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open training set for write: " + path);
    json h;
    h["mode"] = to_string(header.mode);
    h["gating_metric"] = header.gating_metric;
    h["seed"] = header.seed;
    out << h.dump() << "\n";
    for (const auto& l : labels) {
        json j;
        j["query_id"] = l.query_id;
        j["label"] = std::string(1, to_char(l.label));
        j["provenance"] = to_string(l.provenance);
        out << j.dump() << "\n";
    }
    if (!out) throw std::runtime_error("I/O error while writing " + path);
}

std::pair<TrainingSetHeader, std::vector<LabeledQuery>> load_training_set(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open training set: " + path);
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error(path + ": missing header line");
    json h = json::parse(line, nullptr, false);
    if (h.is_discarded() || !h.is_object() || !h.contains("mode"))
        throw std::runtime_error(path + ":1: malformed training-set header");
    TrainingSetHeader header;
    header.mode = labeling_mode_from_string(h.at("mode").get<std::string>());
    header.gating_metric = h.value("gating_metric", "em");
    header.seed = h.value("seed", std::uint64_t{0});

    std::vector<LabeledQuery> labels;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object())
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": malformed line");
        LabeledQuery l;
        l.query_id = j.at("query_id").get<std::string>();
        std::string lab = j.at("label").get<std::string>();
        if (lab.size() != 1)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad label");
        l.label = label_from_char(lab[0]);
        l.provenance = j.at("provenance").get<std::string>() == "silver_outcome"
                           ? LabelProvenance::silver_outcome
                           : LabelProvenance::inductive_bias;
        labels.push_back(std::move(l));
    }
    return {header, labels};
}

void save_triples(const std::string& path, const std::vector<OutcomeTriple>& triples) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open triples file for write: " + path);
    for (const auto& t : triples) {
        json j;
        j["query_id"] = t.query_id;
        j["correct_no_retrieval"] = t.correct_no_retrieval;
        j["correct_single"] = t.correct_single;
        j["correct_multi"] = t.correct_multi;
        out << j.dump() << "\n";
    }
    if (!out) throw std::runtime_error("I/O error while writing " + path);
}

std::vector<OutcomeTriple> load_triples(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open triples file: " + path);
    std::vector<OutcomeTriple> triples;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object())
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": malformed line");
        OutcomeTriple t;
        t.query_id = j.at("query_id").get<std::string>();
        t.correct_no_retrieval = j.at("correct_no_retrieval").get<bool>();
        t.correct_single = j.at("correct_single").get<bool>();
        t.correct_multi = j.at("correct_multi").get<bool>();
        triples.push_back(std::move(t));
    }
    return triples;
}

}  // namespace arag
