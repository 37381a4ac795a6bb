#include "fileprint/model_io.hpp"

#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "fileprint/errors.hpp"
#include "fileprint/rng.hpp"
#include "test_util.hpp"

using namespace fileprint;

namespace {

FileprintModel trained_toy_model(const std::string& scratch_name) {
    const auto root = testutil::scratch_dir(scratch_name);
    std::filesystem::create_directories(root / "za");
    std::filesystem::create_directories(root / "zb");
    Rng rng(41);
    for (int i = 0; i < 3; ++i) {
        testutil::write_file(root / "za" / (std::to_string(i) + ".bin"),
                             testutil::random_text(rng, 400));
        const auto blob = testutil::random_bytes(rng, 500);
        testutil::write_file(root / "zb" / (std::to_string(i) + ".bin"),
                             std::string(reinterpret_cast<const char*>(blob.data()),
                                         blob.size()));
    }

    PipelineConfig cfg = PipelineConfig::with_seed(13);
    cfg.n1 = 4;
    cfg.n2 = 2;
    cfg.aann_hidden = 5;
    cfg.classifier_hidden = 3;
    cfg.aann_training.max_epochs = 60;
    cfg.classifier_training.max_epochs = 60;
    return train_model(load_corpus(root), cfg);
}

// Smallest structurally valid document, assembled from the round trip of a
// real model so field-corruption tests can patch one thing at a time.
std::string valid_json() {
    static const std::string text = model_to_json(trained_toy_model("model-io-template"));
    return text;
}

std::string replaced(const std::string& text, const std::string& from, const std::string& to) {
    const std::size_t at = text.find(from);
    REQUIRE(at != std::string::npos);
    std::string out = text;
    out.replace(at, from.size(), to);
    return out;
}

}  // namespace

TEST_CASE("a model survives the JSON round trip bit for bit") {
    const FileprintModel model = trained_toy_model("model-io-roundtrip");
    const std::string text = model_to_json(model);
    const FileprintModel loaded = model_from_json(text);

    CHECK(loaded == model);
    CHECK(model_to_json(loaded) == text);
}

TEST_CASE("stream and file save/load round-trip") {
    const FileprintModel model = trained_toy_model("model-io-streams");

    std::ostringstream sink;
    save_model(model, sink);
    std::istringstream source(sink.str());
    CHECK(load_model(source) == model);

    const auto dir = testutil::scratch_dir("model-io-file");
    save_model(model, dir / "model.json");
    CHECK(load_model(dir / "model.json") == model);
    CHECK_THROWS_AS(load_model(dir / "absent.json"), IoError);
}

TEST_CASE("a reloaded model predicts identically") {
    const FileprintModel model = trained_toy_model("model-io-predict");
    const FileprintModel loaded = model_from_json(model_to_json(model));

    Rng rng(42);
    for (int trial = 0; trial < 100; ++trial) {
        const auto data = testutil::random_bytes(rng, 64 + rng.below(512));
        const Prediction a = classify(model, data);
        const Prediction b = classify(loaded, data);
        CHECK(a.label == b.label);
        CHECK(a.scores == b.scores);
    }
}

TEST_CASE("truncated or malformed documents are rejected") {
    const std::string text = valid_json();
    CHECK_THROWS_AS(model_from_json(text.substr(0, text.size() / 2)), CorruptModel);
    CHECK_THROWS_AS(model_from_json(""), CorruptModel);
    CHECK_THROWS_AS(model_from_json("[1,2,3]"), CorruptModel);
    CHECK_THROWS_AS(model_from_json("not json at all"), CorruptModel);
}

TEST_CASE("version mismatches are a distinct failure") {
    const std::string text = replaced(valid_json(), "\"format_version\":1", "\"format_version\":2");
    CHECK_THROWS_AS(model_from_json(text), VersionMismatch);
    try {
        model_from_json(text);
    } catch (const VersionMismatch& e) {
        CHECK(std::string(e.what()).find("2") != std::string::npos);
    }
}

TEST_CASE("corruption errors carry the field path") {
    SUBCASE("missing top-level field") {
        const std::string text = replaced(valid_json(), "\"standardizer\"", "\"standardiser\"");
        try {
            model_from_json(text);
            FAIL("expected CorruptModel");
        } catch (const CorruptModel& e) {
            CHECK(std::string(e.what()).find("standardizer") != std::string::npos);
        }
    }
    SUBCASE("non-numeric entry") {
        const std::string text = replaced(valid_json(), "\"stddev\":[", "\"stddev\":[\"x\",");
        try {
            model_from_json(text);
            FAIL("expected CorruptModel");
        } catch (const CorruptModel& e) {
            CHECK(std::string(e.what()).find(".standardizer.stddev[0]") != std::string::npos);
        }
    }
    SUBCASE("zero standard deviation") {
        FileprintModel model = trained_toy_model("model-io-zero-std");
        model.standardizer.stddev[1] = 0.0;
        try {
            model_from_json(model_to_json(model));
            FAIL("expected CorruptModel");
        } catch (const CorruptModel& e) {
            CHECK(std::string(e.what()).find(".standardizer.stddev[1]") != std::string::npos);
        }
    }
    SUBCASE("bad activation name") {
        const std::string text = replaced(valid_json(), "\"tanh\"", "\"softmax\"");
        CHECK_THROWS_AS(model_from_json(text), CorruptModel);
    }
    SUBCASE("inconsistent dimensions") {
        FileprintModel model = trained_toy_model("model-io-bad-dims");
        model.labels.push_back("extra");
        try {
            model_from_json(model_to_json(model));
            FAIL("expected CorruptModel");
        } catch (const CorruptModel& e) {
            CHECK(std::string(e.what()).find("classifier") != std::string::npos);
        }
    }
}

TEST_CASE("labels with awkward characters round-trip") {
    FileprintModel model = trained_toy_model("model-io-labels");
    model.labels = {"quo\"te", "back\\slash"};
    // Keep the classifier consistent with two labels; the toy model already
    // has two classes.
    const FileprintModel loaded = model_from_json(model_to_json(model));
    CHECK(loaded.labels == model.labels);
}
