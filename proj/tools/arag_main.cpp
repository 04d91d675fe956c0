#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "arag/cli.hpp"
#include "arag/config.hpp"

int main(int argc, char** argv) {
    arag::RunConfig config;

    // the config file is applied before flag parsing so that flags win
    for (int i = 1; i < argc - 1; ++i) {
        if (std::string(argv[i]) == "--config") {
            try {
                arag::load_config_file(config, argv[i + 1]);
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                return 2;
            }
            break;
        }
    }

    CLI::App app{"adaptive retrieval-augmented QA engine"};
    app.require_subcommand(1);

    std::string mode = "adaptive";
    std::vector<std::string> trace_paths;
    std::string config_path;  // consumed by the pre-scan above

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "flat key = value config file");
        cmd->add_option("--seed", config.seed, "seed for every stochastic component");
        cmd->add_option("--out", config.out_dir, "output directory");
        cmd->add_option("--corpus", config.corpus_path, "corpus JSONL file");
        cmd->add_option("--queries", config.query_path, "query JSONL file");
        cmd->add_option("--index", config.index_path, "index snapshot path");
        cmd->add_option("--backend", config.backend, "mock or remote");
        cmd->add_option("--mock-script", config.mock_script, "mock backend JSONL script");
        cmd->add_option("--base-url", config.base_url, "remote backend base URL");
        cmd->add_option("--model", config.model, "remote backend model name");
        cmd->add_option("--k", config.k, "documents per retrieval step");
        cmd->add_option("--max-steps", config.max_steps, "multi-step cap");
        cmd->add_option("--k1", config.k1, "BM25 k1");
        cmd->add_option("--b", config.b, "BM25 b");
        cmd->add_option("--workers", config.workers, "worker threads");
        return cmd;
    };

    add_common(app.add_subcommand("index", "build the BM25 index snapshot"));

    auto* label = add_common(app.add_subcommand("label", "build classifier training labels"));
    label->add_option("--label-mode", config.label_mode, "full, silver_only or bias_only");
    label->add_option("--gating-metric", config.gating_metric, "em or acc");
    label->add_option("--sample", config.sample_per_dataset, "outcome sample per dataset");
    label->add_option("--bias-sample", config.bias_sample_per_dataset,
                      "extra bias-labeled sample per dataset");
    label->add_option("--fail-fraction", config.label_fail_fraction,
                      "tolerated fraction of failed queries");
    label->add_option("--triples", config.triples_path, "outcome triples output path");
    label->add_option("--training-set", config.training_set_path, "training set output path");
    label->add_option("--exclude", config.exclusion_path, "exclusion list output path");

    auto* train = add_common(app.add_subcommand("train", "train the complexity classifier"));
    train->add_option("--training-set", config.training_set_path, "training set JSONL");
    train->add_option("--classifier", config.classifier_path, "model output path");
    train->add_option("--epochs", config.epochs, "training epochs");
    train->add_option("--lr", config.lr, "learning rate");
    train->add_option("--val-fraction", config.val_fraction, "held-out fraction");
    train->add_option("--dim", config.dim, "feature hash dimension");

    auto* evaluate = add_common(app.add_subcommand("evaluate", "run a strategy over the queries"));
    evaluate->add_option("--mode", mode, "no_retrieval, single, multi, adaptive or oracle")
        ->required();
    evaluate->add_option("--classifier", config.classifier_path, "classifier model (adaptive)");
    evaluate->add_option("--triples", config.triples_path, "outcome triples (oracle)");
    evaluate->add_option("--exclude", config.exclusion_path, "query ids to skip");

    auto* report = add_common(app.add_subcommand("report", "summarize trace files"));
    report->add_option("traces", trace_paths, "trace JSONL files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // usage problems are exit code 2
    }

    std::string command;
    for (auto* sub : app.get_subcommands()) command = sub->get_name();
    return arag::dispatch(command, config, mode, trace_paths);
}
