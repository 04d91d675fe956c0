#include "arag/config.hpp"

#include <fstream>

namespace arag {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    throw ConfigError("config key \"" + key + "\": expected a boolean, got \"" + value + "\"");
}

template <typename T>
T parse_num(const std::string& key, const std::string& value) {
    try {
        if constexpr (std::is_floating_point_v<T>) {
            return static_cast<T>(std::stod(value));
        } else if constexpr (std::is_signed_v<T>) {
            return static_cast<T>(std::stoll(value));
        } else {
            return static_cast<T>(std::stoull(value));
        }
    } catch (const std::exception&) {
        throw ConfigError("config key \"" + key + "\": expected a number, got \"" + value + "\"");
    }
}

std::string unescape(const std::string& s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\\' && i + 1 < s.size()) {
            char c = s[++i];
            if (c == 'n') out.push_back('\n');
            else if (c == 't') out.push_back('\t');
            else out.push_back(c);
        } else {
            out.push_back(s[i]);
        }
    }
    return out;
}

std::vector<std::string> split_stop_sequences(const std::string& value) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= value.size()) {
        std::size_t sep = value.find("||", pos);
        std::string piece = value.substr(pos, sep == std::string::npos ? std::string::npos : sep - pos);
        if (!piece.empty()) out.push_back(unescape(piece));
        if (sep == std::string::npos) break;
        pos = sep + 2;
    }
    return out;
}

}  // namespace

void apply_config_value(RunConfig& c, const std::string& key, const std::string& value) {
    if (key == "corpus_path") c.corpus_path = value;
    else if (key == "query_path") c.query_path = value;
    else if (key == "index_path") c.index_path = value;
    else if (key == "backend") c.backend = value;
    else if (key == "mock_script") c.mock_script = value;
    else if (key == "base_url") c.base_url = value;
    else if (key == "model") c.model = value;
    else if (key == "api_key_env") c.api_key_env = value;
    else if (key == "timeout_seconds") c.timeout_seconds = parse_num<double>(key, value);
    else if (key == "max_retries") c.max_retries = parse_num<int>(key, value);
    else if (key == "max_in_flight") c.max_in_flight = parse_num<int>(key, value);
    else if (key == "k1") c.k1 = parse_num<double>(key, value);
    else if (key == "b") c.b = parse_num<double>(key, value);
    else if (key == "stem") c.stem = parse_bool(key, value);
    else if (key == "stopwords") c.stopwords = parse_bool(key, value);
    else if (key == "k") c.k = parse_num<std::size_t>(key, value);
    else if (key == "max_steps") c.max_steps = parse_num<int>(key, value);
    else if (key == "full_chain") c.full_chain = parse_bool(key, value);
    else if (key == "max_new_tokens") c.max_new_tokens = parse_num<int>(key, value);
    else if (key == "temperature") c.temperature = parse_num<double>(key, value);
    else if (key == "stop_sequences") c.stop_sequences = split_stop_sequences(value);
    else if (key == "prompt_no_retrieval") c.prompt_no_retrieval = value;
    else if (key == "prompt_single_step") c.prompt_single_step = value;
    else if (key == "prompt_multi_step") c.prompt_multi_step = value;
    else if (key == "classifier_path") c.classifier_path = value;
    else if (key == "dim") c.dim = parse_num<std::uint32_t>(key, value);
    else if (key == "epochs") c.epochs = parse_num<int>(key, value);
    else if (key == "lr") c.lr = parse_num<double>(key, value);
    else if (key == "val_fraction") c.val_fraction = parse_num<double>(key, value);
    else if (key == "label_mode") c.label_mode = value;
    else if (key == "gating_metric") c.gating_metric = value;
    else if (key == "sample_per_dataset") c.sample_per_dataset = parse_num<std::size_t>(key, value);
    else if (key == "bias_sample_per_dataset") c.bias_sample_per_dataset = parse_num<std::size_t>(key, value);
    else if (key == "label_fail_fraction") c.label_fail_fraction = parse_num<double>(key, value);
    else if (key == "training_set_path") c.training_set_path = value;
    else if (key == "triples_path") c.triples_path = value;
    else if (key == "exclusion_path") c.exclusion_path = value;
    else if (key == "seed") c.seed = parse_num<std::uint64_t>(key, value);
    else if (key == "out_dir") c.out_dir = value;
    else if (key == "workers") c.workers = parse_num<int>(key, value);
    else throw ConfigError("unknown config key \"" + key + "\"");
}

void load_config_file(RunConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        try {
            apply_config_value(config, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

}  // namespace arag
