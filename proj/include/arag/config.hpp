#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace arag {

/// Configuration or usage problem; mapped to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    // inputs
    std::string corpus_path;
    std::string query_path;
    std::string index_path;  // snapshot to load, or to write for `index`

    // backend
    std::string backend = "mock";  // mock | remote
    std::string mock_script;
    std::string base_url;
    std::string model;
    std::string api_key_env = "ARAG_API_KEY";
    double timeout_seconds = 30.0;
    int max_retries = 2;
    int max_in_flight = 4;

    // retrieval
    double k1 = 1.2;
    double b = 0.75;
    bool stem = false;
    bool stopwords = false;
    std::size_t k = 3;  // documents per retrieval step
    int max_steps = 5;
    bool full_chain = false;

    // generation
    int max_new_tokens = 256;
    double temperature = 0.0;
    std::vector<std::string> stop_sequences;  // "||"-separated in config
    std::string prompt_no_retrieval;  // template files; empty keeps built-ins
    std::string prompt_single_step;
    std::string prompt_multi_step;

    // classifier
    std::string classifier_path;
    std::uint32_t dim = 1u << 18;
    int epochs = 100;
    double lr = 3e-5;
    double val_fraction = 0.1;

    // labeling
    std::string label_mode = "full";  // full | silver_only | bias_only
    std::string gating_metric = "em";  // em | acc
    std::size_t sample_per_dataset = 400;
    std::size_t bias_sample_per_dataset = 0;
    double label_fail_fraction = 0.0;
    std::string training_set_path;

    // evaluation
    std::string triples_path;
    std::string exclusion_path;

    // run
    std::uint64_t seed = 0;
    std::string out_dir = "out";
    int workers = 1;
};

/// Applies one `key = value` assignment; throws ConfigError on unknown keys
/// or unparsable values.
void apply_config_value(RunConfig& config, const std::string& key, const std::string& value);

/// Flat key = value file, `#` comments, blank lines ignored.
void load_config_file(RunConfig& config, const std::string& path);

}  // namespace arag
