#include "fileprint/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fileprint/errors.hpp"
#include "fileprint/rng.hpp"

namespace fileprint {

namespace {

// Deviations this small carry no information at double precision for
// byte-frequency features (components are bounded by 1); treat the feature as
// constant rather than amplify rounding noise by its reciprocal.
constexpr double kDegenerateStd = 1e-9;

void copy_bfd(const NormalizedBfd& bfd, std::span<double> row) {
    std::copy(bfd.freq.begin(), bfd.freq.end(), row.begin());
}

struct FlatCorpus {
    std::vector<std::string> labels;        // sorted class order
    Matrix bfd;                             // one row per file, 256 wide
    std::vector<std::size_t> class_index;   // row -> class
};

FlatCorpus flatten(const LabeledCorpus& corpus) {
    FlatCorpus flat;
    flat.labels = corpus.labels();
    flat.bfd = Matrix(corpus.file_count(), 256);
    flat.class_index.reserve(corpus.file_count());

    std::size_t row = 0;
    std::size_t cls = 0;
    for (const auto& [label, files] : corpus.classes) {
        for (const FileRef& ref : files) {
            copy_bfd(normalize(count_file(ref.path)), flat.bfd.row(row));
            flat.class_index.push_back(cls);
            ++row;
        }
        ++cls;
    }
    return flat;
}

Standardizer fit_standardizer(const Matrix& data, std::vector<std::size_t>& degenerate) {
    const std::size_t n = data.rows();
    const std::size_t d = data.cols();
    Standardizer st;
    st.mean.assign(d, 0.0);
    st.stddev.assign(d, 0.0);

    for (std::size_t r = 0; r < n; ++r) {
        const auto row = data.row(r);
        for (std::size_t c = 0; c < d; ++c) st.mean[c] += row[c];
    }
    for (double& m : st.mean) m /= static_cast<double>(n);

    for (std::size_t r = 0; r < n; ++r) {
        const auto row = data.row(r);
        for (std::size_t c = 0; c < d; ++c) {
            const double dev = row[c] - st.mean[c];
            st.stddev[c] += dev * dev;
        }
    }
    for (std::size_t c = 0; c < d; ++c) {
        st.stddev[c] = std::sqrt(st.stddev[c] / static_cast<double>(n));
        if (st.stddev[c] <= kDegenerateStd) {
            st.stddev[c] = 1.0;
            degenerate.push_back(c);
        }
    }
    return st;
}

MlpNetwork encoder_half(const MlpNetwork& aann) {
    MlpNetwork enc;
    enc.layers.assign(aann.layers.begin(), aann.layers.begin() + 3);
    enc.weights.assign(aann.weights.begin(), aann.weights.begin() + 2);
    enc.biases.assign(aann.biases.begin(), aann.biases.begin() + 2);
    return enc;
}

std::vector<double> feature_vector(const FileprintModel& model, const NormalizedBfd& bfd) {
    const std::vector<double> projected =
        project(model.pca, std::span<const double>(bfd.freq.data(), bfd.freq.size()));
    return forward(model.aann_encoder, model.standardizer.apply(projected)).back();
}

Prediction predict(const FileprintModel& model, const NormalizedBfd& bfd) {
    Prediction p;
    p.scores = model.classifier.output(feature_vector(model, bfd));
    p.label_index = 0;
    for (std::size_t i = 1; i < p.scores.size(); ++i)
        if (p.scores[i] > p.scores[p.label_index]) p.label_index = i;
    p.label = model.labels[p.label_index];
    return p;
}

}  // namespace

std::vector<double> Standardizer::apply(std::span<const double> x) const {
    if (x.size() != mean.size())
        throw DimensionMismatch("input has " + std::to_string(x.size()) +
                                " components, standardizer has " + std::to_string(mean.size()));
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - mean[i]) / stddev[i];
    return out;
}

PipelineConfig PipelineConfig::with_seed(std::uint64_t seed) {
    PipelineConfig cfg;
    cfg.seed = seed;
    cfg.aann_training.seed = splitmix64(seed);
    cfg.classifier_training.seed = splitmix64(cfg.aann_training.seed);
    return cfg;
}

std::uint64_t ConfusionMatrix::total() const {
    std::uint64_t n = 0;
    for (const auto& row : cells)
        for (std::uint64_t c : row) n += c;
    return n;
}

std::uint64_t ConfusionMatrix::diagonal() const {
    std::uint64_t n = 0;
    for (std::size_t i = 0; i < cells.size(); ++i) n += cells[i][i];
    return n;
}

FileprintModel train_model(const LabeledCorpus& train_corpus, const PipelineConfig& config,
                           TrainSummary* summary) {
    if (config.n2 < 1 || config.n2 >= config.n1 || config.n1 > 256)
        throw InvalidConfig("configuration requires 1 <= n2 < n1 <= 256");
    if (config.aann_hidden == 0 || config.classifier_hidden == 0)
        throw InvalidConfig("hidden layer sizes must be positive");
    if (train_corpus.classes.size() < 2)
        throw NoClasses("training needs at least two classes");
    for (const auto& [label, files] : train_corpus.classes)
        if (files.size() < 2)
            throw InsufficientFiles("class " + label + " has " + std::to_string(files.size()) +
                                    " files, needs 2");

    FlatCorpus flat = flatten(train_corpus);
    const std::size_t n_files = flat.bfd.rows();
    const std::size_t n_classes = flat.labels.size();

    FileprintModel model;
    model.labels = flat.labels;
    model.config = config;
    model.pca = fit_pca(flat.bfd, config.n1);

    Matrix projected(n_files, config.n1);
    for (std::size_t r = 0; r < n_files; ++r) {
        const std::vector<double> z = project(model.pca, flat.bfd.row(r));
        std::copy(z.begin(), z.end(), projected.row(r).begin());
    }

    std::vector<std::size_t> degenerate;
    model.standardizer = fit_standardizer(projected, degenerate);
    Matrix standardized(n_files, config.n1);
    for (std::size_t r = 0; r < n_files; ++r) {
        const std::vector<double> z = model.standardizer.apply(projected.row(r));
        std::copy(z.begin(), z.end(), standardized.row(r).begin());
    }

    MlpNetwork aann = init_network({{config.n1, Activation::Linear},
                                    {config.aann_hidden, Activation::Tanh},
                                    {config.n2, Activation::Linear},
                                    {config.aann_hidden, Activation::Tanh},
                                    {config.n1, Activation::Linear}},
                                   config.aann_training.seed);
    const TrainingReport aann_report = train(aann, standardized, standardized,
                                             config.aann_training);
    model.aann_encoder = encoder_half(aann);

    Matrix features(n_files, config.n2);
    for (std::size_t r = 0; r < n_files; ++r) {
        const std::vector<double> f = forward(model.aann_encoder, standardized.row(r)).back();
        std::copy(f.begin(), f.end(), features.row(r).begin());
    }

    Matrix one_hot(n_files, n_classes);
    for (std::size_t r = 0; r < n_files; ++r) one_hot(r, flat.class_index[r]) = 1.0;

    model.classifier = init_network({{config.n2, Activation::Linear},
                                     {config.classifier_hidden, Activation::Tanh},
                                     {n_classes, Activation::Logistic}},
                                    config.classifier_training.seed);
    const TrainingReport cls_report =
        train(model.classifier, features, one_hot, config.classifier_training);

    if (summary) {
        summary->classes = n_classes;
        summary->files = n_files;
        summary->pca_error_at_n1 = truncation_error(model.pca.eigenvalues, config.n1);
        summary->pca_error_total = truncation_error(model.pca.eigenvalues, 0);
        summary->aann = aann_report;
        summary->classifier = cls_report;
        summary->degenerate_features = degenerate;

        std::size_t correct = 0;
        for (std::size_t r = 0; r < n_files; ++r) {
            const std::vector<double> scores = model.classifier.output(features.row(r));
            std::size_t best = 0;
            for (std::size_t i = 1; i < scores.size(); ++i)
                if (scores[i] > scores[best]) best = i;
            if (best == flat.class_index[r]) ++correct;
        }
        summary->training_accuracy = static_cast<double>(correct) / static_cast<double>(n_files);
    }
    return model;
}

std::vector<double> extract_features(const FileprintModel& model, const ByteHistogram& hist) {
    return feature_vector(model, normalize(hist));
}

std::vector<double> extract_features(const FileprintModel& model,
                                     std::span<const std::uint8_t> data) {
    return feature_vector(model, normalize(count_bytes(data)));
}

Prediction classify(const FileprintModel& model, const ByteHistogram& hist) {
    return predict(model, normalize(hist));
}

Prediction classify(const FileprintModel& model, std::span<const std::uint8_t> data) {
    return predict(model, normalize(count_bytes(data)));
}

std::pair<ConfusionMatrix, double> evaluate(const FileprintModel& model,
                                            const LabeledCorpus& test) {
    if (test.file_count() == 0) throw EmptyInput("test corpus has no files");

    ConfusionMatrix cm;
    cm.labels = model.labels;
    cm.cells.assign(model.labels.size(),
                    std::vector<std::uint64_t>(model.labels.size(), 0));

    for (const auto& [label, files] : test.classes) {
        const auto it = std::find(model.labels.begin(), model.labels.end(), label);
        if (it == model.labels.end())
            throw UnknownLabel("test class " + label + " is not in the model");
        const std::size_t actual = static_cast<std::size_t>(it - model.labels.begin());
        for (const FileRef& ref : files) {
            const Prediction p = predict(model, normalize(count_file(ref.path)));
            ++cm.cells[p.label_index][actual];
        }
    }
    const double acc = cm.accuracy();
    return {std::move(cm), acc};
}

std::vector<double> pca_error_curve(const LabeledCorpus& corpus) {
    FlatCorpus flat = flatten(corpus);
    const Matrix scatter = scatter_matrix(flat.bfd);
    const EigenDecomposition eig = jacobi_eigendecompose(scatter);

    // The scatter matrix is positive semidefinite; eigenvalues that come out
    // a hair negative are rounding artifacts. Flooring them keeps the error
    // series non-increasing and pins E at k = d to exactly zero.
    std::vector<double> floored(eig.eigenvalues.size());
    for (std::size_t i = 0; i < floored.size(); ++i)
        floored[i] = std::max(eig.eigenvalues[i], 0.0);

    std::vector<double> curve(floored.size() + 1);
    for (std::size_t k = 0; k <= floored.size(); ++k)
        curve[k] = truncation_error(floored, k);
    return curve;
}

}  // namespace fileprint
