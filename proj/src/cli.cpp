#include "arag/cli.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <set>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

#include "arag/classifier.hpp"
#include "arag/corpus.hpp"
#include "arag/eval.hpp"
#include "arag/labeler.hpp"
#include "arag/llm.hpp"
#include "arag/retriever.hpp"
#include "arag/strategies.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace arag {

namespace {

void require_file(const std::string& path, const std::string& what) {
    if (path.empty()) throw ConfigError(what + " is not configured");
    if (!fs::exists(path)) throw ConfigError(what + " not found: " + path);
}

std::unique_ptr<GeneratorBackend> make_backend(const RunConfig& c) {
    if (c.backend == "mock") {
        require_file(c.mock_script, "mock script (mock_script)");
        return std::make_unique<MockBackend>(MockBackend::from_script(c.mock_script));
    }
    if (c.backend == "remote") {
        if (c.base_url.empty() || c.model.empty())
            throw ConfigError("remote backend needs base_url and model");
        RemoteBackendConfig rc;
        rc.base_url = c.base_url;
        rc.model = c.model;
        rc.api_key_env = c.api_key_env;
        rc.timeout_seconds = c.timeout_seconds;
        rc.max_retries = c.max_retries;
        rc.max_in_flight = c.max_in_flight;
        return std::make_unique<RemoteBackend>(rc);
    }
    throw ConfigError("unknown backend \"" + c.backend + "\" (expected mock or remote)");
}

StrategyConfig make_strategy_config(const RunConfig& c) {
    StrategyConfig sc;
    sc.top_k = c.k;
    sc.max_steps = c.max_steps;
    sc.full_chain_retrieval = c.full_chain;
    sc.generation.max_new_tokens = c.max_new_tokens;
    sc.generation.temperature = c.temperature;
    sc.generation.stop_sequences = c.stop_sequences;
    try {
        sc.templates = PromptTemplates::from_files(c.prompt_no_retrieval, c.prompt_single_step,
                                                   c.prompt_multi_step);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    return sc;
}

InvertedIndex build_or_load_index(const RunConfig& c, const std::vector<Document>& docs) {
    if (!c.index_path.empty()) {
        if (!fs::exists(c.index_path))
            throw ConfigError("index snapshot not found: " + c.index_path +
                              " (run `arag index` first or drop index_path to build in memory)");
        InvertedIndex idx = InvertedIndex::load(c.index_path);
        if (idx.doc_ids().size() != docs.size())
            throw ConfigError("index snapshot " + c.index_path + " does not match the corpus (" +
                              std::to_string(idx.doc_ids().size()) + " vs " +
                              std::to_string(docs.size()) + " documents)");
        for (std::size_t i = 0; i < docs.size(); ++i)
            if (idx.doc_ids()[i] != docs[i].doc_id)
                throw ConfigError("index snapshot " + c.index_path +
                                  " does not match the corpus at ordinal " + std::to_string(i));
        return idx;
    }
    return InvertedIndex::build(docs, {c.k1, c.b}, {c.stem, c.stopwords});
}

/// fn(i) over [0, n); results must be written to pre-sized slots. The first
/// exception is rethrown after all workers have drained.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mtx;
    auto work = [&] {
        std::size_t i;
        while ((i = next.fetch_add(1)) < n) {
            if (failed.load()) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mtx);
                if (!first_error) first_error = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    int count = std::min<int>(workers, static_cast<int>(n));
    pool.reserve(count);
    for (int w = 0; w < count; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

std::unordered_set<std::string> load_exclusions(const std::string& path) {
    std::unordered_set<std::string> ids;
    if (path.empty()) return ids;
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open exclusion file: " + path);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) ids.insert(line);
    }
    return ids;
}

// deterministic Fisher-Yates; std::shuffle is implementation-defined
template <typename T>
void seeded_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[rng() % i]);
}

bool judged_correct(const StrategyResult& r, const QueryRecord& q, const std::string& metric) {
    if (!r.answer) return false;
    if (metric == "acc") return accuracy_contains(*r.answer, q.gold_answers) == 1;
    return exact_match(*r.answer, q.gold_answers) == 1;
}

json metric_row_json(const MetricRow& row, double total_steps, std::size_t query_count) {
    json j;
    j["em"] = row.em;
    j["f1"] = row.f1;
    j["acc"] = row.acc;
    j["avg_steps"] = row.avg_steps;
    j["total_steps"] = total_steps;
    j["avg_time"] = row.avg_time;
    if (row.rel_time) j["rel_time"] = *row.rel_time;
    j["query_count"] = query_count;
    return j;
}

json config_snapshot(const RunConfig& c) {
    json j;
    j["corpus_path"] = c.corpus_path;
    j["query_path"] = c.query_path;
    j["index_path"] = c.index_path;
    j["backend"] = c.backend;
    j["mock_script"] = c.mock_script;
    j["base_url"] = c.base_url;
    j["model"] = c.model;
    j["k1"] = c.k1;
    j["b"] = c.b;
    j["stem"] = c.stem;
    j["stopwords"] = c.stopwords;
    j["k"] = c.k;
    j["max_steps"] = c.max_steps;
    j["full_chain"] = c.full_chain;
    j["max_new_tokens"] = c.max_new_tokens;
    j["temperature"] = c.temperature;
    j["seed"] = c.seed;
    j["workers"] = c.workers;
    j["gating_metric"] = c.gating_metric;
    j["label_mode"] = c.label_mode;
    return j;
}

std::string default_path(const RunConfig& c, const std::string& configured,
                         const std::string& filename) {
    return configured.empty() ? c.out_dir + "/" + filename : configured;
}

double total_steps_of(const std::vector<StrategyResult>& results) {
    double total = 0;
    for (const auto& r : results) total += r.steps;
    return total;
}

}  // namespace

int cmd_index(const RunConfig& config) {
    require_file(config.corpus_path, "corpus file (corpus_path)");
    auto docs = load_corpus(config.corpus_path);
    auto index = InvertedIndex::build(docs, {config.k1, config.b}, {config.stem, config.stopwords});
    fs::create_directories(config.out_dir);
    std::string out_path = default_path(config, config.index_path, "index.bin");
    index.save(out_path);
    std::cout << "indexed " << index.stats().doc_count << " documents, avg_doc_len "
              << index.stats().avg_doc_len << ", snapshot " << out_path << "\n";
    return 0;
}

int cmd_label(const RunConfig& config) {
    require_file(config.corpus_path, "corpus file (corpus_path)");
    require_file(config.query_path, "query file (query_path)");
    LabelingMode mode = labeling_mode_from_string(config.label_mode);
    if (config.gating_metric != "em" && config.gating_metric != "acc")
        throw ConfigError("gating_metric must be em or acc, got \"" + config.gating_metric + "\"");
    bool needs_outcomes = mode != LabelingMode::bias_only;
    if (needs_outcomes && config.sample_per_dataset == 0)
        throw ConfigError("sample_per_dataset is 0 but label_mode \"" + config.label_mode +
                          "\" needs strategy outcomes");

    auto docs = load_corpus(config.corpus_path);
    auto queries = load_queries(config.query_path);
    if (queries.empty()) throw ConfigError("query file is empty: " + config.query_path);

    // per-dataset seeded sample: first sample_per_dataset for outcome runs,
    // next bias_sample_per_dataset labeled purely by dataset bias
    std::map<std::string, std::vector<std::size_t>> by_dataset;
    for (std::size_t i = 0; i < queries.size(); ++i)
        by_dataset[queries[i].dataset_id].push_back(i);

    std::mt19937_64 rng(config.seed);
    std::vector<std::size_t> silver_sel, bias_sel;
    if (mode == LabelingMode::bias_only && config.sample_per_dataset == 0) {
        for (std::size_t i = 0; i < queries.size(); ++i) bias_sel.push_back(i);
    } else {
        for (auto& [dataset, indices] : by_dataset) {
            seeded_shuffle(indices, rng);
            std::size_t n_silver = std::min(config.sample_per_dataset, indices.size());
            std::size_t n_bias = std::min(config.bias_sample_per_dataset, indices.size() - n_silver);
            for (std::size_t i = 0; i < n_silver; ++i) silver_sel.push_back(indices[i]);
            for (std::size_t i = 0; i < n_bias; ++i) bias_sel.push_back(indices[n_silver + i]);
        }
    }
    if (mode == LabelingMode::bias_only) {
        bias_sel.insert(bias_sel.end(), silver_sel.begin(), silver_sel.end());
        silver_sel.clear();
    }
    std::sort(silver_sel.begin(), silver_sel.end());
    std::sort(bias_sel.begin(), bias_sel.end());

    // run the three strategies over the silver sample
    std::vector<OutcomeTriple> triples(silver_sel.size());
    std::vector<std::string> failures(silver_sel.size());
    std::unique_ptr<GeneratorBackend> backend;
    InvertedIndex index;
    std::unique_ptr<Bm25Retriever> retriever;
    if (!silver_sel.empty()) {
        backend = make_backend(config);
        index = build_or_load_index(config, docs);
        retriever = std::make_unique<Bm25Retriever>(index, docs);
        StrategyConfig sc = make_strategy_config(config);

        parallel_for(silver_sel.size(), config.workers, [&](std::size_t slot) {
            const QueryRecord& q = queries[silver_sel[slot]];
            StrategyDeps deps{retriever.get(), backend.get(), sc};
            try {
                OutcomeTriple t;
                t.query_id = q.query_id;
                t.correct_no_retrieval =
                    judged_correct(run_no_retrieval(q, deps), q, config.gating_metric);
                t.correct_single =
                    judged_correct(run_single_step(q, deps), q, config.gating_metric);
                t.correct_multi =
                    judged_correct(run_multi_step(q, deps), q, config.gating_metric);
                triples[slot] = std::move(t);
            } catch (const std::exception& e) {
                failures[slot] = e.what();
            }
        });
    }

    std::size_t failed = 0;
    for (const auto& f : failures)
        if (!f.empty()) ++failed;
    if (!silver_sel.empty() &&
        static_cast<double>(failed) >
            config.label_fail_fraction * static_cast<double>(silver_sel.size())) {
        std::string first;
        for (const auto& f : failures)
            if (!f.empty()) { first = f; break; }
        throw std::runtime_error("labeling failed for " + std::to_string(failed) + "/" +
                                 std::to_string(silver_sel.size()) + " queries (tolerance " +
                                 std::to_string(config.label_fail_fraction) + "); first: " + first);
    }

    std::vector<OutcomeTriple> ok_triples;
    std::map<std::string, OutcomeTriple> triple_map;
    for (std::size_t slot = 0; slot < silver_sel.size(); ++slot) {
        if (!failures[slot].empty()) {
            std::cerr << "warning: query " << queries[silver_sel[slot]].query_id
                      << " skipped: " << failures[slot] << "\n";
            continue;
        }
        ok_triples.push_back(triples[slot]);
        triple_map[triples[slot].query_id] = triples[slot];
    }

    // labeled set over the full selection, in input query order
    std::vector<std::size_t> selected = silver_sel;
    selected.insert(selected.end(), bias_sel.begin(), bias_sel.end());
    std::sort(selected.begin(), selected.end());
    selected.erase(std::unique(selected.begin(), selected.end()), selected.end());
    std::vector<QueryRecord> selected_queries;
    for (auto i : selected) selected_queries.push_back(queries[i]);

    auto labels = build_training_set(selected_queries, triple_map, mode);

    fs::create_directories(config.out_dir);
    std::string triples_out = default_path(config, config.triples_path, "triples.jsonl");
    save_triples(triples_out, ok_triples);
    TrainingSetHeader header{mode, config.gating_metric, config.seed};
    std::string train_out = default_path(config, config.training_set_path, "training_set.jsonl");
    save_training_set(train_out, header, labels);
    std::string excl_out = default_path(config, config.exclusion_path, "excluded_query_ids.txt");
    {
        std::ofstream out(excl_out, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open exclusion file for write: " + excl_out);
        for (const auto& q : selected_queries) out << q.query_id << "\n";
    }

    std::array<std::size_t, 3> by_label{};
    std::size_t silver_count = 0;
    for (const auto& l : labels) {
        ++by_label[static_cast<std::size_t>(l.label)];
        if (l.provenance == LabelProvenance::silver_outcome) ++silver_count;
    }
    std::cout << "labeled " << labels.size() << " queries (A " << by_label[0] << ", B "
              << by_label[1] << ", C " << by_label[2] << "; silver " << silver_count << ", bias "
              << labels.size() - silver_count << "), " << failed << " failed\n"
              << "wrote " << triples_out << ", " << train_out << ", " << excl_out << "\n";
    return failed == 0 ? 0 : 1;
}

int cmd_train(const RunConfig& config) {
    require_file(config.query_path, "query file (query_path)");
    std::string train_path = default_path(config, config.training_set_path, "training_set.jsonl");
    require_file(train_path, "training set (training_set_path)");

    auto [header, labels] = load_training_set(train_path);
    if (labels.empty()) throw ConfigError("training set has no examples: " + train_path);

    auto queries = load_queries(config.query_path);
    std::unordered_map<std::string, const QueryRecord*> by_id;
    for (const auto& q : queries) by_id[q.query_id] = &q;

    std::vector<std::pair<std::string, ComplexityLabel>> pairs;
    pairs.reserve(labels.size());
    for (const auto& l : labels) {
        auto it = by_id.find(l.query_id);
        if (it == by_id.end())
            throw std::runtime_error("training set references unknown query_id \"" + l.query_id + "\"");
        pairs.emplace_back(it->second->question, l.label);
    }

    FeaturizerConfig fc;
    fc.dim = config.dim;
    TrainOptions opts;
    opts.epochs = config.epochs;
    opts.learning_rate = config.lr;
    opts.seed = config.seed;
    opts.val_fraction = config.val_fraction;
    opts.on_epoch = [](int epoch, double loss, double val_acc) {
        std::cout << "epoch " << epoch << " loss " << loss;
        if (val_acc >= 0.0) std::cout << " val_acc " << val_acc;
        std::cout << "\n";
    };

    ClassifierModel model = train(pairs, fc, opts);

    std::size_t correct = 0;
    for (const auto& [question, label] : pairs)
        if (predict(model, question).label == label) ++correct;
    double train_acc = static_cast<double>(correct) / static_cast<double>(pairs.size());

    fs::create_directories(config.out_dir);
    std::string model_out = default_path(config, config.classifier_path, "classifier.bin");
    model.save(model_out);
    std::cout << "trained on " << pairs.size() << " examples (mode " << to_string(header.mode)
              << ", gate " << header.gating_metric << "), final loss "
              << model.meta.final_train_loss << ", train accuracy " << train_acc << ", model "
              << model_out << "\n";
    return 0;
}

int cmd_evaluate(const RunConfig& config, const std::string& mode) {
    static const std::set<std::string> kModes{"no_retrieval", "single", "multi", "adaptive",
                                              "oracle"};
    if (!kModes.count(mode))
        throw ConfigError("unknown evaluate mode \"" + mode +
                          "\" (expected no_retrieval|single|multi|adaptive|oracle)");
    require_file(config.corpus_path, "corpus file (corpus_path)");
    require_file(config.query_path, "query file (query_path)");

    std::string classifier_path = default_path(config, config.classifier_path, "classifier.bin");
    std::string triples_path = default_path(config, config.triples_path, "triples.jsonl");
    ClassifierModel model;
    std::map<std::string, OutcomeTriple> triple_map;
    if (mode == "adaptive") {
        if (!fs::exists(classifier_path))
            throw ConfigError("adaptive mode needs a classifier model, missing: " + classifier_path +
                              " (run `arag train` first)");
        model = ClassifierModel::load(classifier_path);
    }
    if (mode == "oracle") {
        if (!fs::exists(triples_path))
            throw ConfigError("oracle mode needs outcome triples, missing: " + triples_path +
                              " (run `arag label` first)");
        for (auto& t : load_triples(triples_path)) triple_map[t.query_id] = t;
    }

    auto docs = load_corpus(config.corpus_path);
    auto all_queries = load_queries(config.query_path);
    auto excluded = load_exclusions(config.exclusion_path);
    std::vector<QueryRecord> queries;
    for (auto& q : all_queries)
        if (!excluded.count(q.query_id)) queries.push_back(std::move(q));
    if (queries.empty()) throw ConfigError("no queries left to evaluate");

    auto index = build_or_load_index(config, docs);
    Bm25Retriever retriever(index, docs);
    auto backend = make_backend(config);
    StrategyConfig sc = make_strategy_config(config);

    std::vector<StrategyResult> results(queries.size());
    std::vector<ComplexityLabel> used_labels(queries.size(), ComplexityLabel::A);
    parallel_for(queries.size(), config.workers, [&](std::size_t i) {
        const QueryRecord& q = queries[i];
        StrategyDeps deps{&retriever, backend.get(), sc};
        if (mode == "no_retrieval") {
            results[i] = run_no_retrieval(q, deps);
        } else if (mode == "single") {
            used_labels[i] = ComplexityLabel::B;
            results[i] = run_single_step(q, deps);
        } else if (mode == "multi") {
            used_labels[i] = ComplexityLabel::C;
            results[i] = run_multi_step(q, deps);
        } else if (mode == "adaptive") {
            used_labels[i] = predict(model, q.question).label;
            results[i] = run_with_label(q, used_labels[i], deps);
        } else {  // oracle
            auto it = triple_map.find(q.query_id);
            ComplexityLabel label = it != triple_map.end()
                                        ? label_by_outcome(it->second).value_or(label_by_bias(q))
                                        : label_by_bias(q);
            used_labels[i] = label;
            results[i] = run_with_label(q, label, deps);
        }
    });

    fs::create_directories(config.out_dir);
    std::string trace_out = config.out_dir + "/trace_" + mode + ".jsonl";
    save_trace(trace_out, results);

    std::map<std::string, QueryRecord> query_map;
    for (const auto& q : queries) query_map[q.query_id] = q;
    std::optional<double> baseline;
    MetricRow overall = aggregate(results, query_map);
    if (mode == "single") {
        baseline = overall.avg_time;
        overall.rel_time = 1.0;
    }

    json report;
    report["mode"] = mode;
    report["overall"] = metric_row_json(overall, total_steps_of(results), results.size());

    std::map<std::string, std::vector<StrategyResult>> per_dataset;
    for (std::size_t i = 0; i < queries.size(); ++i)
        per_dataset[queries[i].dataset_id].push_back(results[i]);
    json datasets = json::object();
    for (const auto& [dataset, rs] : per_dataset) {
        MetricRow row = aggregate(rs, query_map, baseline);
        datasets[dataset] = metric_row_json(row, total_steps_of(rs), rs.size());
    }
    report["per_dataset"] = std::move(datasets);

    std::array<std::size_t, 3> dist{};
    std::array<double, 3> label_time{};
    for (std::size_t i = 0; i < results.size(); ++i) {
        auto l = static_cast<std::size_t>(used_labels[i]);
        ++dist[l];
        label_time[l] += results[i].elapsed;
    }
    if (mode == "adaptive" || mode == "oracle") {
        json jd;
        const double n = static_cast<double>(queries.size());
        for (int l = 0; l < 3; ++l) {
            std::string name(1, static_cast<char>('A' + l));
            jd[name] = dist[l];
            jd[name + "_pct"] = 100.0 * static_cast<double>(dist[l]) / n;
            jd[name + "_time_per_query"] =
                dist[l] == 0 ? 0.0 : label_time[l] / static_cast<double>(dist[l]);
        }
        report["label_distribution"] = std::move(jd);
        std::cout << "label distribution: A " << dist[0] << ", B " << dist[1] << ", C " << dist[2]
                  << "\n";
    }

    if (mode == "adaptive" && fs::exists(triples_path)) {
        // confusion against oracle labels where outcome triples exist; the
        // triples file may cover training queries excluded from this run
        std::map<std::string, OutcomeTriple> relevant;
        for (auto& t : load_triples(triples_path))
            if (query_map.count(t.query_id)) relevant[t.query_id] = t;
        auto reference = build_training_set(queries, relevant, LabelingMode::full);
        std::vector<std::pair<std::string, ComplexityLabel>> preds;
        for (std::size_t i = 0; i < queries.size(); ++i)
            preds.emplace_back(queries[i].query_id, used_labels[i]);
        ClassifierReport rep = classifier_report(preds, reference);
        json jc;
        jc["overall_accuracy"] = rep.overall_accuracy;
        jc["per_class_accuracy"] = rep.per_class_accuracy;
        jc["confusion"] = rep.confusion.counts;
        report["classifier"] = std::move(jc);
    }

    report["config"] = config_snapshot(config);
    std::string report_out = config.out_dir + "/report_" + mode + ".json";
    {
        std::ofstream out(report_out, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open report for write: " + report_out);
        out << report.dump(2) << "\n";
    }

    std::cout << "mode " << mode << ": " << results.size() << " queries, em " << overall.em
              << ", f1 " << overall.f1 << ", acc " << overall.acc << ", avg_steps "
              << overall.avg_steps << ", avg_time " << overall.avg_time << "\n"
              << "wrote " << trace_out << ", " << report_out << "\n";
    return 0;
}

int cmd_report(const RunConfig& config, const std::vector<std::string>& trace_paths) {
    if (trace_paths.empty()) throw ConfigError("report needs at least one trace file");
    require_file(config.query_path, "query file (query_path)");
    for (const auto& p : trace_paths) require_file(p, "trace file");

    auto queries = load_queries(config.query_path);
    std::map<std::string, QueryRecord> query_map;
    for (const auto& q : queries) query_map[q.query_id] = q;

    struct Row {
        std::string name;
        MetricRow metrics;
        double total_steps = 0;
        std::size_t count = 0;
        bool all_single = false;
    };
    std::vector<Row> rows;
    std::optional<double> baseline;
    for (const auto& path : trace_paths) {
        auto results = load_trace(path);
        Row row;
        row.name = fs::path(path).filename().string();
        row.metrics = aggregate(results, query_map);
        row.total_steps = total_steps_of(results);
        row.count = results.size();
        row.all_single = !results.empty() &&
                         std::all_of(results.begin(), results.end(), [](const StrategyResult& r) {
                             return r.strategy == StrategyKind::SingleStep;
                         });
        if (row.all_single && !baseline) baseline = row.metrics.avg_time;
        rows.push_back(std::move(row));
    }
    for (auto& row : rows)
        if (baseline && *baseline > 0.0) row.metrics.rel_time = row.metrics.avg_time / *baseline;

    std::cout << std::left << std::setw(28) << "trace" << std::right << std::setw(8) << "queries"
              << std::setw(9) << "EM" << std::setw(9) << "F1" << std::setw(9) << "Acc"
              << std::setw(10) << "AvgStep" << std::setw(10) << "TotStep" << std::setw(11)
              << "AvgTime" << std::setw(9) << "RelTime" << "\n";
    for (const auto& row : rows) {
        std::cout << std::left << std::setw(28) << row.name << std::right << std::setw(8)
                  << row.count << std::fixed << std::setprecision(4) << std::setw(9)
                  << row.metrics.em << std::setw(9) << row.metrics.f1 << std::setw(9)
                  << row.metrics.acc << std::setw(10) << row.metrics.avg_steps << std::setw(10)
                  << std::setprecision(0) << row.total_steps << std::setprecision(4)
                  << std::setw(11) << row.metrics.avg_time;
        if (row.metrics.rel_time)
            std::cout << std::setw(9) << *row.metrics.rel_time;
        else
            std::cout << std::setw(9) << "-";
        std::cout << "\n";
        std::cout.unsetf(std::ios::fixed);
    }
    return 0;
}

int dispatch(const std::string& command, const RunConfig& config, const std::string& mode,
             const std::vector<std::string>& trace_paths) {
    try {
        if (command == "index") return cmd_index(config);
        if (command == "label") return cmd_label(config);
        if (command == "train") return cmd_train(config);
        if (command == "evaluate") return cmd_evaluate(config, mode);
        if (command == "report") return cmd_report(config, trace_paths);
        throw ConfigError("unknown command \"" + command + "\"");
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace arag
