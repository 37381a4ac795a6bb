#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fileprint/corpus.hpp"
#include "fileprint/histogram.hpp"
#include "fileprint/mlp.hpp"
#include "fileprint/pca.hpp"

namespace fileprint {

// Per-feature affine rescaling to zero mean and unit variance, fitted on the
// PCA outputs of the training set. Constant features get their deviation
// pinned to 1 and are reported as degenerate.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> stddev;

    std::vector<double> apply(std::span<const double> x) const;

    bool operator==(const Standardizer&) const = default;
};

struct PipelineConfig {
    std::size_t n1 = 60;                 // PCA components retained
    std::size_t n2 = 15;                 // compressor bottleneck width
    std::size_t aann_hidden = 40;        // width of compressor layers 2 and 4
    std::size_t classifier_hidden = 25;  // classifier hidden width
    // Standardized inputs put the compressor on unit-scale data where a
    // gentle step and light momentum converge without oscillation; the
    // classifier tolerates a brisker schedule on the compressed features.
    TrainingConfig aann_training{
        .learning_rate = 5e-4, .momentum = 0.5, .max_epochs = 200, .mse_goal = 1e-4};
    TrainingConfig classifier_training{
        .learning_rate = 0.004, .momentum = 0.9, .max_epochs = 2500, .mse_goal = 2e-3};
    std::uint64_t seed = 0;

    // Fills the sub-training seeds deterministically from one master seed.
    static PipelineConfig with_seed(std::uint64_t seed);

    bool operator==(const PipelineConfig&) const = default;
};

// The trained detector: every stage needed to map raw bytes to a class.
struct FileprintModel {
    static constexpr std::int64_t kFormatVersion = 1;

    std::int64_t format_version = kFormatVersion;
    std::vector<std::string> labels;  // canonical class order
    PcaModel pca;                     // 256 -> n1
    Standardizer standardizer;        // per-feature, over PCA outputs
    MlpNetwork aann_encoder;          // front half of the compressor, n1 -> n2
    MlpNetwork classifier;            // n2 -> classifier_hidden -> |labels|
    PipelineConfig config;

    bool operator==(const FileprintModel&) const = default;
};

struct Prediction {
    std::string label;
    std::size_t label_index = 0;
    std::vector<double> scores;  // one per class, aligned with model labels
};

// Counts of predicted class (rows) by actual class (columns).
struct ConfusionMatrix {
    std::vector<std::string> labels;
    std::vector<std::vector<std::uint64_t>> cells;

    std::uint64_t total() const;
    std::uint64_t diagonal() const;
    double accuracy() const { return static_cast<double>(diagonal()) / static_cast<double>(total()); }
};

// Everything worth printing after a training run.
struct TrainSummary {
    std::size_t classes = 0;
    std::size_t files = 0;
    double pca_error_at_n1 = 0.0;  // truncation error of the retained basis
    double pca_error_total = 0.0;  // truncation error at k = 0
    TrainingReport aann;
    TrainingReport classifier;
    double training_accuracy = 0.0;
    std::vector<std::size_t> degenerate_features;
};

// The full training pipeline: byte-frequency vectors, PCA to n1 dimensions,
// standardization, a five-layer auto-associative compressor
// (n1, aann_hidden, n2, aann_hidden, n1) trained to reproduce its input, and
// a three-layer classifier on the n2 bottleneck features with one-hot
// targets. Deterministic given the config seeds.
FileprintModel train_model(const LabeledCorpus& train, const PipelineConfig& config,
                           TrainSummary* summary = nullptr);

// Bottleneck features of one input: encode(standardize(project(bfd))).
std::vector<double> extract_features(const FileprintModel& model, const ByteHistogram& hist);
std::vector<double> extract_features(const FileprintModel& model,
                                     std::span<const std::uint8_t> data);

// Classifier scores over the extracted features; the label is the argmax,
// ties broken toward the lowest class index.
Prediction classify(const FileprintModel& model, const ByteHistogram& hist);
Prediction classify(const FileprintModel& model, std::span<const std::uint8_t> data);

// Runs the model over a labeled corpus. Test labels must be a subset of the
// model's labels; throws UnknownLabel otherwise.
std::pair<ConfusionMatrix, double> evaluate(const FileprintModel& model,
                                            const LabeledCorpus& test);

// Truncation-error series E_k for k = 0..256 over the pooled byte-frequency
// vectors of a corpus. Eigenvalues of the scatter are floored at zero, so the
// series is non-increasing and ends exactly at 0.
std::vector<double> pca_error_curve(const LabeledCorpus& corpus);

}  // namespace fileprint
