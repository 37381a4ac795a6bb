#include "fileprint/model_io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fileprint/errors.hpp"

namespace fileprint {

namespace {

using nlohmann::json;

// ---- writing ---------------------------------------------------------------
// The document is emitted by hand so the bytes are a pure function of the
// model: fixed key order, no whitespace variation, reals at 17 significant
// digits (enough to reproduce any double exactly).

void emit_real(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

void emit_string(std::string& out, const std::string& s) {
    out += '"';
    for (const char ch : s) {
        const auto c = static_cast<unsigned char>(ch);
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += ch;
                }
        }
    }
    out += '"';
}

void emit_real_array(std::string& out, const std::vector<double>& v) {
    out += '[';
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        emit_real(out, v[i]);
    }
    out += ']';
}

void emit_matrix(std::string& out, const Matrix& m) {
    out += '[';
    for (std::size_t r = 0; r < m.rows(); ++r) {
        if (r) out += ",\n";
        const auto row = m.row(r);
        out += '[';
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            emit_real(out, row[c]);
        }
        out += ']';
    }
    out += ']';
}

const char* activation_name(Activation a) {
    switch (a) {
        case Activation::Linear: return "linear";
        case Activation::Tanh: return "tanh";
        case Activation::Logistic: return "logistic";
    }
    return "linear";
}

void emit_network(std::string& out, const MlpNetwork& net) {
    out += "{\"layers\":[";
    for (std::size_t i = 0; i < net.layers.size(); ++i) {
        if (i) out += ',';
        out += "{\"size\":";
        out += std::to_string(net.layers[i].size);
        out += ",\"activation\":\"";
        out += activation_name(net.layers[i].activation);
        out += "\"}";
    }
    out += "],\n\"weights\":[";
    for (std::size_t i = 0; i < net.weights.size(); ++i) {
        if (i) out += ",\n";
        emit_matrix(out, net.weights[i]);
    }
    out += "],\n\"biases\":[";
    for (std::size_t i = 0; i < net.biases.size(); ++i) {
        if (i) out += ',';
        emit_real_array(out, net.biases[i]);
    }
    out += "]}";
}

void emit_training(std::string& out, const TrainingConfig& t) {
    out += "{\"learning_rate\":";
    emit_real(out, t.learning_rate);
    out += ",\"momentum\":";
    emit_real(out, t.momentum);
    out += ",\"max_epochs\":";
    out += std::to_string(t.max_epochs);
    out += ",\"mse_goal\":";
    emit_real(out, t.mse_goal);
    out += ",\"plateau_window\":";
    out += std::to_string(t.plateau_window);
    out += ",\"plateau_rel_improvement\":";
    emit_real(out, t.plateau_rel_improvement);
    out += ",\"perturb_magnitude\":";
    emit_real(out, t.perturb_magnitude);
    out += ",\"seed\":";
    out += std::to_string(t.seed);
    out += '}';
}

// ---- reading ---------------------------------------------------------------

[[noreturn]] void corrupt(const std::string& path, const std::string& why) {
    throw CorruptModel(path + ": " + why);
}

const json& field(const json& obj, const std::string& path, const char* key) {
    if (!obj.is_object()) corrupt(path, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) corrupt(path + "." + key, "missing");
    return *it;
}

double real_at(const json& j, const std::string& path) {
    if (!j.is_number()) corrupt(path, "expected a number");
    return j.get<double>();
}

std::uint64_t uint_at(const json& j, const std::string& path) {
    if (!(j.is_number_unsigned() || (j.is_number_integer() && j.get<std::int64_t>() >= 0)))
        corrupt(path, "expected a non-negative integer");
    return j.get<std::uint64_t>();
}

std::size_t size_at(const json& j, const std::string& path) {
    return static_cast<std::size_t>(uint_at(j, path));
}

std::vector<double> real_array_at(const json& j, const std::string& path) {
    if (!j.is_array()) corrupt(path, "expected an array");
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(real_at(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

Matrix matrix_at(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) corrupt(path, "expected a non-empty array of rows");
    std::vector<std::vector<double>> rows;
    rows.reserve(j.size());
    for (std::size_t r = 0; r < j.size(); ++r)
        rows.push_back(real_array_at(j[r], path + "[" + std::to_string(r) + "]"));
    for (std::size_t r = 1; r < rows.size(); ++r)
        if (rows[r].size() != rows[0].size()) corrupt(path, "ragged rows");
    if (rows[0].empty()) corrupt(path, "empty rows");
    Matrix m(rows.size(), rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
    return m;
}

Activation activation_at(const json& j, const std::string& path) {
    if (!j.is_string()) corrupt(path, "expected a string");
    const std::string s = j.get<std::string>();
    if (s == "linear") return Activation::Linear;
    if (s == "tanh") return Activation::Tanh;
    if (s == "logistic") return Activation::Logistic;
    corrupt(path, "unknown activation \"" + s + "\"");
}

MlpNetwork network_at(const json& j, const std::string& path) {
    MlpNetwork net;
    const json& layers = field(j, path, "layers");
    if (!layers.is_array() || layers.size() < 2) corrupt(path + ".layers", "need at least two");
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const std::string lp = path + ".layers[" + std::to_string(i) + "]";
        LayerSpec spec;
        spec.size = size_at(field(layers[i], lp, "size"), lp + ".size");
        if (spec.size == 0) corrupt(lp + ".size", "must be positive");
        spec.activation = activation_at(field(layers[i], lp, "activation"), lp + ".activation");
        net.layers.push_back(spec);
    }

    const json& weights = field(j, path, "weights");
    if (!weights.is_array() || weights.size() != net.layers.size() - 1)
        corrupt(path + ".weights", "expected one matrix per layer transition");
    for (std::size_t l = 0; l < weights.size(); ++l) {
        const std::string wp = path + ".weights[" + std::to_string(l) + "]";
        Matrix w = matrix_at(weights[l], wp);
        if (w.rows() != net.layers[l + 1].size || w.cols() != net.layers[l].size)
            corrupt(wp, "shape does not match the layer sizes");
        net.weights.push_back(std::move(w));
    }

    const json& biases = field(j, path, "biases");
    if (!biases.is_array() || biases.size() != net.layers.size() - 1)
        corrupt(path + ".biases", "expected one vector per layer transition");
    for (std::size_t l = 0; l < biases.size(); ++l) {
        const std::string bp = path + ".biases[" + std::to_string(l) + "]";
        std::vector<double> b = real_array_at(biases[l], bp);
        if (b.size() != net.layers[l + 1].size) corrupt(bp, "length does not match the layer");
        net.biases.push_back(std::move(b));
    }
    return net;
}

TrainingConfig training_at(const json& j, const std::string& path) {
    TrainingConfig t;
    t.learning_rate = real_at(field(j, path, "learning_rate"), path + ".learning_rate");
    t.momentum = real_at(field(j, path, "momentum"), path + ".momentum");
    t.max_epochs = size_at(field(j, path, "max_epochs"), path + ".max_epochs");
    t.mse_goal = real_at(field(j, path, "mse_goal"), path + ".mse_goal");
    t.plateau_window = size_at(field(j, path, "plateau_window"), path + ".plateau_window");
    t.plateau_rel_improvement =
        real_at(field(j, path, "plateau_rel_improvement"), path + ".plateau_rel_improvement");
    t.perturb_magnitude =
        real_at(field(j, path, "perturb_magnitude"), path + ".perturb_magnitude");
    t.seed = uint_at(field(j, path, "seed"), path + ".seed");
    return t;
}

}  // namespace

std::string model_to_json(const FileprintModel& model) {
    std::string out;
    out.reserve(1 << 20);
    out += "{\"format_version\":";
    out += std::to_string(model.format_version);
    out += ",\n\"labels\":[";
    for (std::size_t i = 0; i < model.labels.size(); ++i) {
        if (i) out += ',';
        emit_string(out, model.labels[i]);
    }
    out += "],\n\"pca\":{\"mean\":";
    emit_real_array(out, model.pca.mean);
    out += ",\n\"basis\":";
    emit_matrix(out, model.pca.basis);
    out += ",\n\"eigenvalues\":";
    emit_real_array(out, model.pca.eigenvalues);
    out += "},\n\"standardizer\":{\"mean\":";
    emit_real_array(out, model.standardizer.mean);
    out += ",\"stddev\":";
    emit_real_array(out, model.standardizer.stddev);
    out += "},\n\"aann_encoder\":";
    emit_network(out, model.aann_encoder);
    out += ",\n\"classifier\":";
    emit_network(out, model.classifier);
    out += ",\n\"config\":{\"n1\":";
    out += std::to_string(model.config.n1);
    out += ",\"n2\":";
    out += std::to_string(model.config.n2);
    out += ",\"aann_hidden\":";
    out += std::to_string(model.config.aann_hidden);
    out += ",\"classifier_hidden\":";
    out += std::to_string(model.config.classifier_hidden);
    out += ",\"aann_training\":";
    emit_training(out, model.config.aann_training);
    out += ",\"classifier_training\":";
    emit_training(out, model.config.classifier_training);
    out += ",\"seed\":";
    out += std::to_string(model.config.seed);
    out += "}}\n";
    return out;
}

FileprintModel model_from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw CorruptModel(std::string("document: ") + e.what());
    }
    if (!doc.is_object()) throw CorruptModel("document: expected an object");

    const std::int64_t version = [&] {
        const json& v = field(doc, "", "format_version");
        if (!v.is_number_integer() && !v.is_number_unsigned())
            corrupt(".format_version", "expected an integer");
        return v.get<std::int64_t>();
    }();
    if (version != FileprintModel::kFormatVersion)
        throw VersionMismatch("model format_version " + std::to_string(version) +
                              ", this build reads " +
                              std::to_string(FileprintModel::kFormatVersion));

    FileprintModel model;
    model.format_version = version;

    const json& labels = field(doc, "", "labels");
    if (!labels.is_array() || labels.empty()) corrupt(".labels", "expected a non-empty array");
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const std::string lp = ".labels[" + std::to_string(i) + "]";
        if (!labels[i].is_string()) corrupt(lp, "expected a string");
        const std::string s = labels[i].get<std::string>();
        if (s.empty()) corrupt(lp, "empty label");
        model.labels.push_back(s);
    }

    const json& pca = field(doc, "", "pca");
    model.pca.mean = real_array_at(field(pca, ".pca", "mean"), ".pca.mean");
    model.pca.basis = matrix_at(field(pca, ".pca", "basis"), ".pca.basis");
    model.pca.eigenvalues =
        real_array_at(field(pca, ".pca", "eigenvalues"), ".pca.eigenvalues");
    if (model.pca.basis.cols() != model.pca.mean.size())
        corrupt(".pca.basis", "width does not match the mean");
    if (model.pca.eigenvalues.size() != model.pca.mean.size())
        corrupt(".pca.eigenvalues", "length does not match the mean");
    if (model.pca.basis.rows() > model.pca.mean.size())
        corrupt(".pca.basis", "more rows than input dimensions");

    const json& st = field(doc, "", "standardizer");
    model.standardizer.mean =
        real_array_at(field(st, ".standardizer", "mean"), ".standardizer.mean");
    model.standardizer.stddev =
        real_array_at(field(st, ".standardizer", "stddev"), ".standardizer.stddev");
    if (model.standardizer.mean.size() != model.pca.basis.rows())
        corrupt(".standardizer.mean", "length does not match the retained basis");
    if (model.standardizer.stddev.size() != model.standardizer.mean.size())
        corrupt(".standardizer.stddev", "length does not match the mean");
    for (std::size_t i = 0; i < model.standardizer.stddev.size(); ++i)
        if (!(model.standardizer.stddev[i] > 0.0))
            corrupt(".standardizer.stddev[" + std::to_string(i) + "]", "must be positive");

    model.aann_encoder = network_at(field(doc, "", "aann_encoder"), ".aann_encoder");
    model.classifier = network_at(field(doc, "", "classifier"), ".classifier");

    const json& cfg = field(doc, "", "config");
    model.config.n1 = size_at(field(cfg, ".config", "n1"), ".config.n1");
    model.config.n2 = size_at(field(cfg, ".config", "n2"), ".config.n2");
    model.config.aann_hidden =
        size_at(field(cfg, ".config", "aann_hidden"), ".config.aann_hidden");
    model.config.classifier_hidden =
        size_at(field(cfg, ".config", "classifier_hidden"), ".config.classifier_hidden");
    model.config.aann_training =
        training_at(field(cfg, ".config", "aann_training"), ".config.aann_training");
    model.config.classifier_training =
        training_at(field(cfg, ".config", "classifier_training"), ".config.classifier_training");
    model.config.seed = uint_at(field(cfg, ".config", "seed"), ".config.seed");

    if (model.config.n1 != model.pca.basis.rows())
        corrupt(".config.n1", "does not match the retained basis");
    if (model.aann_encoder.input_size() != model.config.n1)
        corrupt(".aann_encoder", "input width does not match n1");
    if (model.aann_encoder.output_size() != model.config.n2)
        corrupt(".aann_encoder", "output width does not match n2");
    if (model.classifier.input_size() != model.config.n2)
        corrupt(".classifier", "input width does not match n2");
    if (model.classifier.output_size() != model.labels.size())
        corrupt(".classifier", "output width does not match the labels");
    return model;
}

void save_model(const FileprintModel& model, std::ostream& out) {
    const std::string text = model_to_json(model);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError("cannot write model");
}

void save_model(const FileprintModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    save_model(model, out);
}

FileprintModel load_model(std::istream& in) {
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("cannot read model");
    return model_from_json(buf.str());
}

FileprintModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return load_model(in);
}

}  // namespace fileprint
