#include "fileprint/corpus.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "fileprint/errors.hpp"
#include "fileprint/histogram.hpp"
#include "fileprint/rng.hpp"
#include "fileprint/synth.hpp"
#include "test_util.hpp"

using namespace fileprint;

namespace {

std::set<std::string> paths_of(const LabeledCorpus& corpus, const std::string& label) {
    std::set<std::string> out;
    for (const FileRef& ref : corpus.classes.at(label)) out.insert(ref.path.string());
    return out;
}

}  // namespace

TEST_CASE("load_corpus maps subdirectories to classes") {
    const auto root = testutil::scratch_dir("corpus-basic");
    std::filesystem::create_directories(root / "doc");
    std::filesystem::create_directories(root / "exe");
    testutil::write_file(root / "doc" / "a.bin", "aaaa");
    testutil::write_file(root / "doc" / "b.bin", "bbbb");
    testutil::write_file(root / "exe" / "c.bin", "cccc");
    testutil::write_file(root / "stray.txt", "ignored");  // not in a class dir

    const LabeledCorpus corpus = load_corpus(root);
    CHECK(corpus.labels() == std::vector<std::string>{"doc", "exe"});
    CHECK(corpus.classes.at("doc").size() == 2);
    CHECK(corpus.classes.at("exe").size() == 1);
    CHECK(corpus.file_count() == 3);
    CHECK(corpus.skipped_empty == 0);

    // Files come back sorted by path.
    CHECK(corpus.classes.at("doc")[0].path.filename() == "a.bin");
    CHECK(corpus.classes.at("doc")[1].path.filename() == "b.bin");
    CHECK(corpus.classes.at("doc")[0].size == 4);
}

TEST_CASE("load_corpus skips zero-length files and counts them") {
    const auto root = testutil::scratch_dir("corpus-empty-file");
    std::filesystem::create_directories(root / "doc");
    testutil::write_file(root / "doc" / "real.bin", "data");
    testutil::write_file(root / "doc" / "hollow.bin", "");

    const LabeledCorpus corpus = load_corpus(root);
    CHECK(corpus.classes.at("doc").size() == 1);
    CHECK(corpus.skipped_empty == 1);
}

TEST_CASE("load_corpus error cases") {
    const auto root = testutil::scratch_dir("corpus-errors");
    CHECK_THROWS_AS(load_corpus(root / "missing"), IoError);
    CHECK_THROWS_AS(load_corpus(root), NoClasses);

    std::filesystem::create_directories(root / "void");
    CHECK_THROWS_AS(load_corpus(root), EmptyClass);
}

TEST_CASE("split is deterministic, disjoint, and per-class") {
    const auto root = testutil::scratch_dir("corpus-split");
    for (const std::string label : {"one", "two"}) {
        std::filesystem::create_directories(root / label);
        for (int i = 0; i < 12; ++i)
            testutil::write_file(root / label / (std::to_string(i) + ".bin"), "x" + label);
    }
    const LabeledCorpus corpus = load_corpus(root);

    const auto [train_a, test_a] = split(corpus, 8, 4, 99);
    const auto [train_b, test_b] = split(corpus, 8, 4, 99);

    for (const std::string label : {"one", "two"}) {
        CHECK(train_a.classes.at(label).size() == 8);
        CHECK(test_a.classes.at(label).size() == 4);

        const auto train_paths = paths_of(train_a, label);
        const auto test_paths = paths_of(test_a, label);
        std::set<std::string> both;
        std::set_intersection(train_paths.begin(), train_paths.end(), test_paths.begin(),
                              test_paths.end(), std::inserter(both, both.begin()));
        CHECK(both.empty());

        CHECK(paths_of(train_b, label) == train_paths);
        CHECK(paths_of(test_b, label) == test_paths);
    }

    CHECK_THROWS_AS(split(corpus, 10, 3, 0), InsufficientFiles);
}

TEST_CASE("synth_corpus is deterministic and respects the size range") {
    const auto root_a = testutil::scratch_dir("synth-a");
    const auto root_b = testutil::scratch_dir("synth-b");

    const LabeledCorpus a = synth_corpus(root_a, default_synth_classes(), 3, 512, 2048, 77);
    const LabeledCorpus b = synth_corpus(root_b, default_synth_classes(), 3, 512, 2048, 77);

    CHECK(a.classes.size() == 6);
    CHECK(a.file_count() == 18);
    CHECK(a.labels() == std::vector<std::string>{"ascii-text", "low-entropy", "markup", "mixed",
                                                 "sawtooth", "uniform-random"});

    for (const auto& [label, files] : a.classes) {
        REQUIRE(b.classes.at(label).size() == files.size());
        for (std::size_t i = 0; i < files.size(); ++i) {
            CHECK(files[i].size >= 512);
            CHECK(files[i].size <= 2048);
            CHECK(testutil::read_file(files[i].path) ==
                  testutil::read_file(b.classes.at(label)[i].path));
        }
    }

    // A different seed must actually change the bytes.
    const auto root_c = testutil::scratch_dir("synth-c");
    const LabeledCorpus c = synth_corpus(root_c, default_synth_classes(), 3, 512, 2048, 78);
    CHECK(testutil::read_file(c.classes.at("uniform-random")[0].path) !=
          testutil::read_file(a.classes.at("uniform-random")[0].path));
}

TEST_CASE("synth_corpus validates its spec") {
    const auto root = testutil::scratch_dir("synth-bad");
    const std::vector<SynthSpec> one_class = {{"solo", SynthClass::AsciiText}};
    CHECK_THROWS_AS(synth_corpus(root, one_class, 2, 10, 20, 0), BadSpec);
    CHECK_THROWS_AS(synth_corpus(root, default_synth_classes(), 0, 10, 20, 0), BadSpec);
    CHECK_THROWS_AS(synth_corpus(root, default_synth_classes(), 2, 20, 10, 0), BadSpec);
    CHECK_THROWS_AS(synth_corpus(root, default_synth_classes(), 2, 0, 10, 0), BadSpec);

    std::vector<SynthSpec> dup = default_synth_classes();
    dup.push_back({"mixed", SynthClass::Mixed});
    CHECK_THROWS_AS(synth_corpus(root, dup, 2, 10, 20, 0), BadSpec);
}

TEST_CASE("uniform-random bytes stay within binomial bounds") {
    const auto root = testutil::scratch_dir("synth-binomial");
    const std::vector<SynthSpec> spec = {{"uniform-random", SynthClass::UniformRandom},
                                         {"ascii-text", SynthClass::AsciiText}};
    // Fixed seed keeps this statistical check deterministic.
    const std::size_t size = 1 << 20;
    const LabeledCorpus corpus = synth_corpus(root, spec, 1, size, size, 1);

    const NormalizedBfd bfd =
        normalize(count_file(corpus.classes.at("uniform-random")[0].path));
    const double p = 1.0 / 256.0;
    const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(size));
    // 4 sigma: the bound must hold for all 256 bins at once, and a 3-sigma
    // excursion somewhere among 256 draws is more likely than not.
    for (const double f : bfd.freq) CHECK(std::abs(f - p) <= 4.0 * sigma);
}

TEST_CASE("each synthetic class has its advertised byte statistics") {
    const auto root = testutil::scratch_dir("synth-stats");
    const std::size_t size = 1 << 18;
    const LabeledCorpus corpus =
        synth_corpus(root, default_synth_classes(), 1, size, size, 5);

    const auto bfd_of = [&](const char* label) {
        return normalize(count_file(corpus.classes.at(label)[0].path));
    };

    const NormalizedBfd text = bfd_of("ascii-text");
    double printable = 0.0;
    for (int b = 0x20; b < 0x7f; ++b) printable += text.freq[b];
    printable += text.freq['\n'];
    CHECK(printable == doctest::Approx(1.0));
    CHECK(text.freq['e'] > text.freq['q']);

    const NormalizedBfd markup = bfd_of("markup");
    CHECK(markup.freq['<'] > 0.01);
    CHECK(markup.freq['>'] > 0.01);
    CHECK(markup.freq['/'] > 0.005);
    CHECK(markup.freq['<'] > 10.0 * text.freq['<']);

    const NormalizedBfd low = bfd_of("low-entropy");
    int used = 0;
    for (const double f : low.freq) used += f > 0.0;
    CHECK(used <= 8);
    CHECK(low.freq[0] > 0.5);

    const NormalizedBfd saw = bfd_of("sawtooth");
    // Frequency ramps with value mod 4: value 4k+3 appears about twice as
    // often as value 4k+1 and four times as often as value 4k.
    double tooth0 = 0.0;
    double tooth3 = 0.0;
    for (int v = 0; v < 256; v += 4) {
        tooth0 += saw.freq[v];
        tooth3 += saw.freq[v + 3];
    }
    CHECK(tooth3 == doctest::Approx(4.0 * tooth0).epsilon(0.05));

    const NormalizedBfd mixed = bfd_of("mixed");
    double mixed_printable = 0.0;
    for (int b = 0x20; b < 0x7f; ++b) mixed_printable += mixed.freq[b];
    CHECK(mixed_printable > 0.55);   // text half plus the random half's share
    CHECK(mixed_printable < 0.95);   // but clearly not pure text
}
