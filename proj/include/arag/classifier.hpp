#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace arag {

/// Query-complexity level, ordered by strategy cost: A = answer directly,
/// B = one retrieval step, C = iterative retrieval.
enum class ComplexityLabel : int { A = 0, B = 1, C = 2 };

char to_char(ComplexityLabel l);
ComplexityLabel label_from_char(char c);

struct FeaturizerConfig {
    std::uint32_t dim = 1u << 18;
    int max_ngram = 2;  // word unigrams + bigrams
};

bool operator==(const FeaturizerConfig& a, const FeaturizerConfig& b);

/// Hashed sparse counts; entries sorted by index with duplicates merged, so
/// downstream accumulation order is deterministic.
struct FeatureVector {
    std::uint32_t dim = 0;
    std::vector<std::pair<std::uint32_t, double>> entries;
};

/// Hashed counts of word n-grams plus a question-length bucket. Pure
/// function of the question text and config.
FeatureVector featurize(const std::string& question, const FeaturizerConfig& config);

struct TrainingMeta {
    int epochs = 0;
    double learning_rate = 0.0;
    std::uint64_t seed = 0;
    double final_train_loss = 0.0;
};

struct ClassifierModel {
    Eigen::MatrixXd weights;  // 3 x dim
    Eigen::Vector3d bias = Eigen::Vector3d::Zero();
    FeaturizerConfig featurizer;
    TrainingMeta meta;

    static ClassifierModel zeros(const FeaturizerConfig& config);

    void save(const std::string& path) const;
    static ClassifierModel load(const std::string& path);
};

struct Prediction {
    ComplexityLabel label = ComplexityLabel::A;
    Eigen::Vector3d probabilities = Eigen::Vector3d::Zero();
};

/// softmax(weights * features + bias); argmax with ties broken toward the
/// cheaper label (A over B over C).
Prediction predict(const ClassifierModel& model, const std::string& question);
Prediction predict_features(const ClassifierModel& model, const FeatureVector& features);

struct LabeledExample {
    FeatureVector features;
    ComplexityLabel label = ComplexityLabel::A;
};

struct Gradient {
    Eigen::MatrixXd weights;  // 3 x dim
    Eigen::Vector3d bias = Eigen::Vector3d::Zero();
};

/// Mean cross-entropy over the batch and its exact analytic gradient.
double loss_and_gradient(const ClassifierModel& model,
                         const std::vector<LabeledExample>& batch, Gradient& grad);
std::pair<double, Gradient> loss_and_gradient(const ClassifierModel& model,
                                              const std::vector<LabeledExample>& batch);

struct TrainOptions {
    int epochs = 100;
    double learning_rate = 3e-5;
    std::uint64_t seed = 0;
    /// Fraction held out (seeded split) for best-epoch selection; 0 trains
    /// on everything for the full epoch count.
    double val_fraction = 0.0;
    /// Per-epoch callback (epoch, train loss, validation accuracy or -1).
    std::function<void(int, double, double)> on_epoch;
};

/// Full-batch gradient descent on the mean cross-entropy, deterministic for
/// a fixed seed. Throws if the loss or weights go non-finite (learning rate
/// too high).
ClassifierModel train(const std::vector<std::pair<std::string, ComplexityLabel>>& pairs,
                      const FeaturizerConfig& config, const TrainOptions& opts);

ClassifierModel train_examples(const std::vector<LabeledExample>& examples,
                               const FeaturizerConfig& config, const TrainOptions& opts);

}  // namespace arag
