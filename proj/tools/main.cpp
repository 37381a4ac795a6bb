// fileprint: content-based file-type detection from byte-frequency spectra.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 data/model error,
// 3 training failed to converge. Standard output carries machine-readable
// results only; everything else goes to stderr.

#include <cinttypes>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fileprint/corpus.hpp"
#include "fileprint/errors.hpp"
#include "fileprint/histogram.hpp"
#include "fileprint/model_io.hpp"
#include "fileprint/pipeline.hpp"
#include "fileprint/report.hpp"
#include "fileprint/synth.hpp"

namespace {

using namespace fileprint;

struct CommonOptions {
    std::size_t n1 = 60;
    std::size_t n2 = 15;
    std::size_t aann_hidden = 40;
    std::size_t classifier_hidden = 25;
    std::size_t max_epochs = 0;   // 0 = keep the training default
    double learning_rate = 0.0;   // 0 = keep the training default
    std::uint64_t seed = 0;
};

PipelineConfig make_config(const CommonOptions& opt) {
    PipelineConfig cfg = PipelineConfig::with_seed(opt.seed);
    cfg.n1 = opt.n1;
    cfg.n2 = opt.n2;
    cfg.aann_hidden = opt.aann_hidden;
    cfg.classifier_hidden = opt.classifier_hidden;
    if (opt.max_epochs) {
        cfg.aann_training.max_epochs = opt.max_epochs;
        cfg.classifier_training.max_epochs = opt.max_epochs;
    }
    if (opt.learning_rate > 0.0) {
        cfg.aann_training.learning_rate = opt.learning_rate;
        cfg.classifier_training.learning_rate = opt.learning_rate;
    }
    return cfg;
}

void add_config_flags(CLI::App& cmd, CommonOptions& opt) {
    cmd.add_option("--n1", opt.n1, "PCA components retained")->capture_default_str();
    cmd.add_option("--n2", opt.n2, "bottleneck feature count")->capture_default_str();
    cmd.add_option("--aann-hidden", opt.aann_hidden, "compressor hidden width")
        ->capture_default_str();
    cmd.add_option("--classifier-hidden", opt.classifier_hidden, "classifier hidden width")
        ->capture_default_str();
    cmd.add_option("--max-epochs", opt.max_epochs, "cap both training runs (0 = default)");
    cmd.add_option("--learning-rate", opt.learning_rate,
                   "override both learning rates (0 = default)");
    cmd.add_option("--seed", opt.seed, "master random seed")->capture_default_str();
}

int run_train(const std::string& corpus_root, const std::string& out_path,
              const CommonOptions& opt) {
    const LabeledCorpus corpus = load_corpus(corpus_root);
    if (corpus.skipped_empty)
        std::cerr << "skipped " << corpus.skipped_empty << " empty file(s)\n";

    TrainSummary summary;
    const FileprintModel model = train_model(corpus, make_config(opt), &summary);

    std::fprintf(stderr, "classes=%zu files=%zu\n", summary.classes, summary.files);
    std::fprintf(stderr, "pca_error_n1=%.6g pca_error_total=%.6g\n", summary.pca_error_at_n1,
                 summary.pca_error_total);
    std::fprintf(stderr, "aann_mse=%.6g aann_epochs=%zu aann_perturbations=%zu\n",
                 summary.aann.final_mse, summary.aann.epochs_run,
                 summary.aann.perturbations_applied);
    std::fprintf(stderr, "classifier_mse=%.6g classifier_epochs=%zu\n",
                 summary.classifier.final_mse, summary.classifier.epochs_run);
    if (!summary.degenerate_features.empty())
        std::fprintf(stderr, "degenerate_features=%zu\n", summary.degenerate_features.size());
    std::fprintf(stderr, "training_accuracy=%.4f\n", summary.training_accuracy);

    save_model(model, std::filesystem::path(out_path));
    std::cerr << "wrote " << out_path << "\n";
    return 0;
}

int run_classify(const std::string& model_path, const std::vector<std::string>& files) {
    const FileprintModel model = load_model(std::filesystem::path(model_path));
    for (const std::string& file : files) {
        const ByteHistogram hist = count_file(file);
        if (hist.total == 0) {
            std::printf("%s\tERROR\tempty\n", file.c_str());
            continue;
        }
        const Prediction p = classify(model, hist);
        std::printf("%s\t%s\t%.6f\n", file.c_str(), p.label.c_str(),
                    p.scores[p.label_index]);
    }
    return 0;
}

int run_evaluate(const std::string& model_path, const std::string& corpus_root, bool csv) {
    const FileprintModel model = load_model(std::filesystem::path(model_path));
    const LabeledCorpus corpus = load_corpus(corpus_root);
    const auto [cm, accuracy] = evaluate(model, corpus);
    std::cout << (csv ? format_confusion_csv(cm) : format_confusion_table(cm));
    std::cout << format_accuracy_line(accuracy);
    return 0;
}

int run_pca_curve(const std::string& corpus_root, std::size_t k_max) {
    const LabeledCorpus corpus = load_corpus(corpus_root);
    const std::vector<double> curve = pca_error_curve(corpus);
    std::printf("k,E_k\n");
    for (std::size_t k = 1; k <= k_max && k < curve.size(); ++k)
        std::printf("%zu,%.17g\n", k, curve[k]);
    return 0;
}

int run_scatter(const std::string& corpus_root, std::size_t dims, const std::string& out_path,
                CommonOptions opt) {
    opt.n2 = dims;
    const LabeledCorpus corpus = load_corpus(corpus_root);
    const FileprintModel model = train_model(corpus, make_config(opt));

    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + out_path + " for writing");
    out << "label";
    for (std::size_t i = 1; i <= dims; ++i) out << ",f" << i;
    out << "\n";

    std::size_t rows = 0;
    for (const auto& [label, files] : corpus.classes) {
        for (const FileRef& ref : files) {
            const std::vector<double> f = extract_features(model, count_file(ref.path));
            out << label;
            char buf[32];
            for (const double v : f) {
                std::snprintf(buf, sizeof(buf), ",%.17g", v);
                out << buf;
            }
            out << "\n";
            ++rows;
        }
    }
    if (!out) throw IoError("error while writing " + out_path);
    std::cerr << "wrote " << out_path << " (" << rows << " rows)\n";
    return 0;
}

int run_synth(const std::string& out_root, std::size_t files_per_class, std::uint64_t size_min,
              std::uint64_t size_max, std::uint64_t seed) {
    const LabeledCorpus corpus =
        synth_corpus(out_root, default_synth_classes(), files_per_class, size_min, size_max, seed);
    std::cerr << "wrote " << corpus.classes.size() << " classes x " << files_per_class
              << " files under " << out_root << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Content-based file-type detector built on byte-frequency fingerprints"};
    app.require_subcommand(1);

    std::string corpus_root;
    std::string model_path;
    std::string out_path;
    std::vector<std::string> files;
    CommonOptions opt;
    bool csv = false;
    std::size_t k_max = 256;
    std::size_t dims = 2;
    std::size_t files_per_class = 120;
    std::uint64_t size_min = 1024;
    std::uint64_t size_max = 256 * 1024;

    CLI::App* train_cmd = app.add_subcommand("train", "Train a detector on a labeled corpus");
    train_cmd->add_option("--corpus", corpus_root, "corpus root, one subdirectory per class")
        ->required()
        ->check(CLI::ExistingDirectory);
    train_cmd->add_option("--out", out_path, "model file to write")->required();
    add_config_flags(*train_cmd, opt);

    CLI::App* classify_cmd = app.add_subcommand("classify", "Classify files with a trained model");
    classify_cmd->add_option("--model", model_path, "model file")
        ->required()
        ->check(CLI::ExistingFile);
    classify_cmd->add_option("files", files, "files to classify")->required()->expected(-1);

    CLI::App* eval_cmd = app.add_subcommand("evaluate", "Confusion matrix over a labeled corpus");
    eval_cmd->add_option("--model", model_path, "model file")
        ->required()
        ->check(CLI::ExistingFile);
    eval_cmd->add_option("--corpus", corpus_root, "labeled test corpus")
        ->required()
        ->check(CLI::ExistingDirectory);
    eval_cmd->add_flag("--csv", csv, "emit the confusion matrix as CSV");

    CLI::App* curve_cmd =
        app.add_subcommand("pca-curve", "Truncation-error curve over a corpus (CSV on stdout)");
    curve_cmd->add_option("--corpus", corpus_root, "corpus root")
        ->required()
        ->check(CLI::ExistingDirectory);
    curve_cmd->add_option("--k-max", k_max, "largest component count to report")
        ->capture_default_str()
        ->check(CLI::Range(std::size_t{1}, std::size_t{256}));

    CLI::App* scatter_cmd = app.add_subcommand(
        "scatter", "Train a 2- or 3-wide bottleneck and export its features as CSV");
    scatter_cmd->add_option("--corpus", corpus_root, "corpus root")
        ->required()
        ->check(CLI::ExistingDirectory);
    scatter_cmd->add_option("--dims", dims, "bottleneck width")
        ->capture_default_str()
        ->check(CLI::IsMember({2, 3}));
    scatter_cmd->add_option("--out", out_path, "CSV file to write")->required();
    add_config_flags(*scatter_cmd, opt);

    CLI::App* synth_cmd =
        app.add_subcommand("synth", "Generate the built-in six-class synthetic corpus");
    synth_cmd->add_option("--out", out_path, "directory to create the corpus under")->required();
    synth_cmd->add_option("--files-per-class", files_per_class, "files per class")
        ->capture_default_str();
    synth_cmd->add_option("--size-min", size_min, "smallest file size in bytes")
        ->capture_default_str();
    synth_cmd->add_option("--size-max", size_max, "largest file size in bytes")
        ->capture_default_str();
    synth_cmd->add_option("--seed", opt.seed, "generation seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*train_cmd) return run_train(corpus_root, out_path, opt);
        if (*classify_cmd) return run_classify(model_path, files);
        if (*eval_cmd) return run_evaluate(model_path, corpus_root, csv);
        if (*curve_cmd) return run_pca_curve(corpus_root, k_max);
        if (*scatter_cmd) return run_scatter(corpus_root, dims, out_path, opt);
        if (*synth_cmd) return run_synth(out_path, files_per_class, size_min, size_max, opt.seed);
    } catch (const InvalidConfig& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const BadSpec& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const NotConverged& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const NonFiniteLoss& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
