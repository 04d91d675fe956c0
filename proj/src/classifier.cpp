#include "arag/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

#include "arag/retriever.hpp"  // tokenize

namespace arag {

char to_char(ComplexityLabel l) {
    return static_cast<char>('A' + static_cast<int>(l));
}

ComplexityLabel label_from_char(char c) {
    if (c < 'A' || c > 'C') throw std::runtime_error(std::string("unknown complexity label '") + c + "'");
    return static_cast<ComplexityLabel>(c - 'A');
}

bool operator==(const FeaturizerConfig& a, const FeaturizerConfig& b) {
    return a.dim == b.dim && a.max_ngram == b.max_ngram;
}

namespace {

// FNV-1a; std::hash is not stable across implementations
std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint32_t bucket_of(std::size_t token_count) {
    return static_cast<std::uint32_t>(std::min<std::size_t>(token_count / 5, 8));
}

}  // namespace

FeatureVector featurize(const std::string& question, const FeaturizerConfig& config) {
    auto toks = tokenize(question);
    std::map<std::uint32_t, double> counts;
    auto bump = [&](const std::string& key) {
        counts[static_cast<std::uint32_t>(fnv1a(key) % config.dim)] += 1.0;
    };
    if (config.max_ngram >= 1)
        for (const auto& t : toks) bump("1\x1f" + t);
    if (config.max_ngram >= 2)
        for (std::size_t i = 0; i + 1 < toks.size(); ++i)
            bump("2\x1f" + toks[i] + "\x1f" + toks[i + 1]);
    bump("len\x1f" + std::to_string(bucket_of(toks.size())));

    FeatureVector fv;
    fv.dim = config.dim;
    fv.entries.assign(counts.begin(), counts.end());
    return fv;
}

ClassifierModel ClassifierModel::zeros(const FeaturizerConfig& config) {
    ClassifierModel m;
    m.featurizer = config;
    m.weights = Eigen::MatrixXd::Zero(3, config.dim);
    m.bias.setZero();
    return m;
}

namespace {

Eigen::Vector3d logits_of(const ClassifierModel& model, const FeatureVector& fv) {
    if (fv.dim != model.featurizer.dim)
        throw std::runtime_error("featurizer config mismatch: feature dim " +
                                 std::to_string(fv.dim) + " vs model dim " +
                                 std::to_string(model.featurizer.dim));
    Eigen::Vector3d logits = model.bias;
    for (const auto& [idx, count] : fv.entries)
        logits += model.weights.col(idx) * count;
    return logits;
}

Eigen::Vector3d softmax(const Eigen::Vector3d& logits) {
    Eigen::Vector3d shifted = logits.array() - logits.maxCoeff();
    Eigen::Vector3d ex = shifted.array().exp();
    return ex / ex.sum();
}

}  // namespace

Prediction predict_features(const ClassifierModel& model, const FeatureVector& features) {
    Prediction pred;
    pred.probabilities = softmax(logits_of(model, features));
    int best = 0;
    for (int i = 1; i < 3; ++i)
        if (pred.probabilities[i] > pred.probabilities[best]) best = i;
    pred.label = static_cast<ComplexityLabel>(best);
    return pred;
}

Prediction predict(const ClassifierModel& model, const std::string& question) {
    return predict_features(model, featurize(question, model.featurizer));
}

double loss_and_gradient(const ClassifierModel& model,
                         const std::vector<LabeledExample>& batch, Gradient& grad) {
    if (batch.empty()) throw std::invalid_argument("loss_and_gradient: empty batch");
    const auto dim = model.featurizer.dim;
    if (grad.weights.rows() != 3 || grad.weights.cols() != static_cast<Eigen::Index>(dim))
        grad.weights.resize(3, dim);
    grad.weights.setZero();
    grad.bias.setZero();

    double loss = 0.0;
    for (const auto& ex : batch) {
        Eigen::Vector3d logits = logits_of(model, ex.features);
        double mx = logits.maxCoeff();
        Eigen::Vector3d shifted = logits.array() - mx;
        double lse = std::log(shifted.array().exp().sum()) + mx;
        int y = static_cast<int>(ex.label);
        loss += lse - logits[y];

        Eigen::Vector3d residual = softmax(logits);
        residual[y] -= 1.0;
        grad.bias += residual;
        for (const auto& [idx, count] : ex.features.entries)
            grad.weights.col(idx) += residual * count;
    }
    const double n = static_cast<double>(batch.size());
    grad.weights /= n;
    grad.bias /= n;
    return loss / n;
}

std::pair<double, Gradient> loss_and_gradient(const ClassifierModel& model,
                                              const std::vector<LabeledExample>& batch) {
    Gradient grad;
    double loss = loss_and_gradient(model, batch, grad);
    return {loss, std::move(grad)};
}

namespace {

double loss_only(const ClassifierModel& model, const std::vector<LabeledExample>& batch) {
    double loss = 0.0;
    for (const auto& ex : batch) {
        Eigen::Vector3d logits = logits_of(model, ex.features);
        double mx = logits.maxCoeff();
        double lse = std::log((logits.array() - mx).exp().sum()) + mx;
        loss += lse - logits[static_cast<int>(ex.label)];
    }
    return loss / static_cast<double>(batch.size());
}

double accuracy(const ClassifierModel& model, const std::vector<LabeledExample>& batch) {
    if (batch.empty()) return 0.0;
    std::size_t correct = 0;
    for (const auto& ex : batch)
        if (predict_features(model, ex.features).label == ex.label) ++correct;
    return static_cast<double>(correct) / static_cast<double>(batch.size());
}

}  // namespace

ClassifierModel train_examples(const std::vector<LabeledExample>& examples,
                               const FeaturizerConfig& config, const TrainOptions& opts) {
    if (examples.empty()) throw std::invalid_argument("train: no examples");

    // seeded split for best-epoch selection
    std::vector<std::size_t> order(examples.size());
    std::iota(order.begin(), order.end(), 0);
    std::size_t n_val = 0;
    if (opts.val_fraction > 0.0) {
        std::mt19937_64 rng(opts.seed);
        std::shuffle(order.begin(), order.end(), rng);
        n_val = static_cast<std::size_t>(opts.val_fraction * static_cast<double>(examples.size()));
        n_val = std::min(n_val, examples.size() - 1);
    }
    std::vector<LabeledExample> val_set, train_set;
    for (std::size_t i = 0; i < order.size(); ++i)
        (i < n_val ? val_set : train_set).push_back(examples[order[i]]);

    ClassifierModel model = ClassifierModel::zeros(config);
    model.meta.epochs = opts.epochs;
    model.meta.learning_rate = opts.learning_rate;
    model.meta.seed = opts.seed;

    Gradient grad;
    double best_val = -1.0;
    Eigen::MatrixXd best_weights;
    Eigen::Vector3d best_bias;

    for (int epoch = 0; epoch < opts.epochs; ++epoch) {
        double loss = loss_and_gradient(model, train_set, grad);
        if (!std::isfinite(loss))
            throw std::runtime_error("training diverged at epoch " + std::to_string(epoch) +
                                     ": non-finite loss (learning rate " +
                                     std::to_string(opts.learning_rate) + " too high?)");
        model.weights.noalias() -= opts.learning_rate * grad.weights;
        model.bias -= opts.learning_rate * grad.bias;
        if (!model.weights.allFinite() || !model.bias.allFinite())
            throw std::runtime_error("training diverged at epoch " + std::to_string(epoch) +
                                     ": non-finite weights (learning rate " +
                                     std::to_string(opts.learning_rate) + " too high?)");

        double val_acc = -1.0;
        if (!val_set.empty()) {
            val_acc = accuracy(model, val_set);
            if (val_acc > best_val) {
                best_val = val_acc;
                best_weights = model.weights;
                best_bias = model.bias;
            }
        }
        if (opts.on_epoch) opts.on_epoch(epoch, loss, val_acc);
    }

    if (!val_set.empty() && best_val >= 0.0) {
        model.weights = std::move(best_weights);
        model.bias = std::move(best_bias);
    }
    model.meta.final_train_loss = loss_only(model, train_set);
    return model;
}

ClassifierModel train(const std::vector<std::pair<std::string, ComplexityLabel>>& pairs,
                      const FeaturizerConfig& config, const TrainOptions& opts) {
    std::vector<LabeledExample> examples;
    examples.reserve(pairs.size());
    for (const auto& [question, label] : pairs)
        examples.push_back({featurize(question, config), label});
    return train_examples(examples, config, opts);
}

namespace {
constexpr char kModelMagic[8] = {'A', 'R', 'A', 'G', 'C', 'L', 'S', '1'};
}

void ClassifierModel::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open model file for write: " + path);
    out.write(kModelMagic, sizeof(kModelMagic));
    auto put = [&out](const auto& v) { out.write(reinterpret_cast<const char*>(&v), sizeof(v)); };
    put(featurizer.dim);
    std::int32_t ngram = featurizer.max_ngram;
    put(ngram);
    std::int32_t epochs = meta.epochs;
    put(epochs);
    put(meta.learning_rate);
    put(meta.seed);
    put(meta.final_train_loss);
    out.write(reinterpret_cast<const char*>(bias.data()), 3 * sizeof(double));
    out.write(reinterpret_cast<const char*>(weights.data()),
              static_cast<std::streamsize>(sizeof(double) * 3 * featurizer.dim));
    if (!out) throw std::runtime_error("I/O error while writing " + path);
}

ClassifierModel ClassifierModel::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kModelMagic, sizeof(magic)) != 0)
        throw std::runtime_error(path + ": not a classifier model of a supported version");
    ClassifierModel m;
    auto get = [&in, &path](auto& v) {
        in.read(reinterpret_cast<char*>(&v), sizeof(v));
        if (!in) throw std::runtime_error("truncated model file: " + path);
    };
    get(m.featurizer.dim);
    std::int32_t ngram = 0, epochs = 0;
    get(ngram);
    m.featurizer.max_ngram = ngram;
    get(epochs);
    m.meta.epochs = epochs;
    get(m.meta.learning_rate);
    get(m.meta.seed);
    get(m.meta.final_train_loss);
    in.read(reinterpret_cast<char*>(m.bias.data()), 3 * sizeof(double));
    m.weights.resize(3, m.featurizer.dim);
    in.read(reinterpret_cast<char*>(m.weights.data()),
            static_cast<std::streamsize>(sizeof(double) * 3 * m.featurizer.dim));
    if (!in) throw std::runtime_error("truncated model file: " + path);
    return m;
}

}  // namespace arag
