#include "arag/eval.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace arag {

std::int64_t ConfusionMatrix::total() const {
    std::int64_t n = 0;
    for (const auto& row : counts)
        for (auto c : row) n += c;
    return n;
}

std::int64_t ConfusionMatrix::row_sum(int true_label) const {
    const auto& row = counts[static_cast<std::size_t>(true_label)];
    return row[0] + row[1] + row[2];
}

namespace {

std::vector<std::string> norm_tokens(const std::string& s) {
    std::istringstream ss(normalize_answer(s));
    std::vector<std::string> toks;
    std::string t;
    while (ss >> t) toks.push_back(t);
    return toks;
}

}  // namespace

int exact_match(const std::string& pred, const std::vector<std::string>& golds) {
    std::string np = normalize_answer(pred);
    for (const auto& g : golds)
        if (np == normalize_answer(g)) return 1;
    return 0;
}

double token_f1(const std::string& pred, const std::vector<std::string>& golds) {
    auto ptoks = norm_tokens(pred);
    std::unordered_map<std::string, int> pcounts;
    for (const auto& t : ptoks) ++pcounts[t];

    double best = 0.0;
    for (const auto& g : golds) {
        auto gtoks = norm_tokens(g);
        if (ptoks.empty() && gtoks.empty()) {
            best = std::max(best, 1.0);
            continue;
        }
        if (ptoks.empty() || gtoks.empty()) continue;
        std::unordered_map<std::string, int> gcounts;
        for (const auto& t : gtoks) ++gcounts[t];
        int overlap = 0;
        for (const auto& [tok, pc] : pcounts) {
            auto it = gcounts.find(tok);
            if (it != gcounts.end()) overlap += std::min(pc, it->second);
        }
        if (overlap == 0) continue;
        double precision = static_cast<double>(overlap) / static_cast<double>(ptoks.size());
        double recall = static_cast<double>(overlap) / static_cast<double>(gtoks.size());
        best = std::max(best, 2.0 * precision * recall / (precision + recall));
    }
    return best;
}

int accuracy_contains(const std::string& pred, const std::vector<std::string>& golds) {
    std::string np = normalize_answer(pred);
    for (const auto& g : golds) {
        std::string ng = normalize_answer(g);
        if (ng.empty()) {
            if (np.empty()) return 1;
            continue;
        }
        if (np.find(ng) != std::string::npos) return 1;
    }
    return 0;
}

MetricRow aggregate(const std::vector<StrategyResult>& results,
                    const std::map<std::string, QueryRecord>& queries,
                    std::optional<double> single_step_avg_time) {
    MetricRow row;
    if (results.empty()) return row;
    double em = 0, f1 = 0, acc = 0, steps = 0, time = 0;
    for (const auto& r : results) {
        auto it = queries.find(r.query_id);
        if (it == queries.end())
            throw std::runtime_error("trace references unknown query_id \"" + r.query_id + "\"");
        const auto& golds = it->second.gold_answers;
        if (r.answer) {
            em += exact_match(*r.answer, golds);
            f1 += token_f1(*r.answer, golds);
            acc += accuracy_contains(*r.answer, golds);
        }
        steps += r.steps;
        time += r.elapsed;
    }
    const double n = static_cast<double>(results.size());
    row.em = em / n;
    row.f1 = f1 / n;
    row.acc = acc / n;
    row.avg_steps = steps / n;
    row.avg_time = time / n;
    if (single_step_avg_time && *single_step_avg_time > 0.0)
        row.rel_time = row.avg_time / *single_step_avg_time;
    return row;
}

ClassifierReport classifier_report(
    const std::vector<std::pair<std::string, ComplexityLabel>>& preds,
    const std::vector<LabeledQuery>& reference) {
    std::unordered_map<std::string, ComplexityLabel> truth;
    for (const auto& l : reference) truth[l.query_id] = l.label;
    if (truth.size() != reference.size())
        throw std::runtime_error("classifier_report: duplicate query_id in reference");
    if (preds.size() != truth.size())
        throw std::runtime_error("classifier_report: prediction/reference id sets differ");

    ClassifierReport rep;
    std::int64_t correct = 0;
    for (const auto& [id, predicted] : preds) {
        auto it = truth.find(id);
        if (it == truth.end())
            throw std::runtime_error("classifier_report: prediction for unknown query_id \"" + id + "\"");
        int t = static_cast<int>(it->second);
        int p = static_cast<int>(predicted);
        ++rep.confusion.counts[t][p];
        if (t == p) ++correct;
    }
    rep.overall_accuracy = preds.empty() ? 0.0
                                         : static_cast<double>(correct) / static_cast<double>(preds.size());
    for (int t = 0; t < 3; ++t) {
        std::int64_t support = rep.confusion.row_sum(t);
        rep.per_class_accuracy[t] =
            support == 0 ? 0.0
                         : static_cast<double>(rep.confusion.counts[t][t]) / static_cast<double>(support);
    }
    return rep;
}

StrategyResult oracle_route(const QueryRecord& q, const OutcomeTriple& triple,
                            StrategyDeps& deps) {
    ComplexityLabel label = label_by_outcome(triple).value_or(label_by_bias(q));
    return run_with_label(q, label, deps);
}

}  // namespace arag
