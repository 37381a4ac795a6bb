#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "fileprint/corpus.hpp"
#include "fileprint/histogram.hpp"
#include "fileprint/model_io.hpp"
#include "fileprint/pipeline.hpp"
#include "fileprint/synth.hpp"

namespace py = pybind11;
using namespace fileprint;

namespace {

std::span<const std::uint8_t> as_span(std::string_view view) {
    return {reinterpret_cast<const std::uint8_t*>(view.data()), view.size()};
}

PipelineConfig make_config(std::size_t n1, std::size_t n2, std::size_t aann_hidden,
                           std::size_t classifier_hidden, std::uint64_t seed,
                           std::size_t max_epochs) {
    PipelineConfig cfg = PipelineConfig::with_seed(seed);
    cfg.n1 = n1;
    cfg.n2 = n2;
    cfg.aann_hidden = aann_hidden;
    cfg.classifier_hidden = classifier_hidden;
    if (max_epochs) {
        cfg.aann_training.max_epochs = max_epochs;
        cfg.classifier_training.max_epochs = max_epochs;
    }
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Content-based file-type detection from byte-frequency fingerprints";

    py::class_<Prediction>(m, "Prediction")
        .def_readonly("label", &Prediction::label)
        .def_readonly("label_index", &Prediction::label_index)
        .def_readonly("scores", &Prediction::scores)
        .def("__repr__", [](const Prediction& p) {
            return "Prediction(label='" + p.label + "')";
        });

    py::class_<ConfusionMatrix>(m, "ConfusionMatrix")
        .def_readonly("labels", &ConfusionMatrix::labels)
        .def_readonly("cells", &ConfusionMatrix::cells)
        .def_property_readonly("accuracy", &ConfusionMatrix::accuracy)
        .def_property_readonly("total", &ConfusionMatrix::total)
        .def_property_readonly("diagonal", &ConfusionMatrix::diagonal);

    py::class_<FileprintModel>(m, "Model")
        .def_property_readonly("labels",
                               [](const FileprintModel& model) { return model.labels; })
        .def_property_readonly("n1", [](const FileprintModel& model) { return model.config.n1; })
        .def_property_readonly("n2", [](const FileprintModel& model) { return model.config.n2; })
        .def("classify",
             [](const FileprintModel& model, std::string_view data) {
                 return classify(model, as_span(data));
             },
             py::arg("data"), "Predict the class of a byte string.")
        .def("classify_file",
             [](const FileprintModel& model, const std::filesystem::path& path) {
                 return classify(model, count_file(path));
             },
             py::arg("path"), "Predict the class of a file on disk.")
        .def("extract_features",
             [](const FileprintModel& model, std::string_view data) {
                 return extract_features(model, as_span(data));
             },
             py::arg("data"), "Bottleneck feature vector of a byte string.")
        .def("save",
             [](const FileprintModel& model, const std::filesystem::path& path) {
                 save_model(model, path);
             },
             py::arg("path"))
        .def_static("load",
                    [](const std::filesystem::path& path) { return load_model(path); },
                    py::arg("path"))
        .def("to_json", &model_to_json)
        .def_static("from_json",
                    [](const std::string& text) { return model_from_json(text); },
                    py::arg("text"))
        .def("__eq__", [](const FileprintModel& a, const FileprintModel& b) { return a == b; })
        .def("__repr__", [](const FileprintModel& model) {
            return "Model(classes=" + std::to_string(model.labels.size()) +
                   ", n1=" + std::to_string(model.config.n1) +
                   ", n2=" + std::to_string(model.config.n2) + ")";
        });

    m.def(
        "bfd",
        [](std::string_view data) {
            const NormalizedBfd b = normalize(count_bytes(as_span(data)));
            return std::vector<double>(b.freq.begin(), b.freq.end());
        },
        py::arg("data"), "Normalized 256-bin byte-frequency distribution of a byte string.");

    m.def(
        "train",
        [](const std::filesystem::path& corpus_root, std::size_t n1, std::size_t n2,
           std::size_t aann_hidden, std::size_t classifier_hidden, std::uint64_t seed,
           std::size_t max_epochs) {
            return train_model(load_corpus(corpus_root),
                               make_config(n1, n2, aann_hidden, classifier_hidden, seed,
                                           max_epochs));
        },
        py::arg("corpus_root"), py::arg("n1") = 60, py::arg("n2") = 15,
        py::arg("aann_hidden") = 40, py::arg("classifier_hidden") = 25, py::arg("seed") = 0,
        py::arg("max_epochs") = 0,
        "Train a detector on a corpus laid out as <root>/<class>/<files>. "
        "max_epochs=0 keeps the training default.");

    m.def(
        "evaluate",
        [](const FileprintModel& model, const std::filesystem::path& corpus_root) {
            return evaluate(model, load_corpus(corpus_root)).first;
        },
        py::arg("model"), py::arg("corpus_root"),
        "Confusion matrix of a model over a labeled corpus.");

    m.def(
        "synth_corpus",
        [](const std::filesystem::path& out_root, std::size_t files_per_class,
           std::uint64_t size_min, std::uint64_t size_max, std::uint64_t seed) {
            const LabeledCorpus c = synth_corpus(out_root, default_synth_classes(),
                                                 files_per_class, size_min, size_max, seed);
            return c.labels();
        },
        py::arg("out_root"), py::arg("files_per_class") = 120, py::arg("size_min") = 1024,
        py::arg("size_max") = 256 * 1024, py::arg("seed") = 0,
        "Generate the built-in six-class synthetic corpus; returns the class labels.");

    m.def(
        "pca_error_curve",
        [](const std::filesystem::path& corpus_root) {
            return pca_error_curve(load_corpus(corpus_root));
        },
        py::arg("corpus_root"),
        "Truncation-error series E_k for k = 0..256 over a corpus.");

    py::register_exception<Error>(m, "FileprintError", PyExc_RuntimeError);
}
