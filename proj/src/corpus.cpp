#include "fileprint/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <string>
#include <system_error>

#include "fileprint/errors.hpp"
#include "fileprint/rng.hpp"

namespace fs = std::filesystem;

namespace fileprint {

std::vector<std::string> LabeledCorpus::labels() const {
    std::vector<std::string> out;
    out.reserve(classes.size());
    for (const auto& [label, files] : classes) out.push_back(label);
    return out;
}

std::size_t LabeledCorpus::file_count() const {
    std::size_t n = 0;
    for (const auto& [label, files] : classes) n += files.size();
    return n;
}

LabeledCorpus load_corpus(const std::filesystem::path& root) {
    std::error_code ec;
    if (!fs::is_directory(root, ec))
        throw IoError("not a directory: " + root.string());

    LabeledCorpus corpus;
    for (const fs::directory_entry& entry : fs::directory_iterator(root)) {
        if (!entry.is_directory()) continue;
        const std::string label = entry.path().filename().string();

        std::vector<FileRef> files;
        for (const fs::directory_entry& f : fs::recursive_directory_iterator(entry.path())) {
            if (!f.is_regular_file()) continue;
            const std::uintmax_t size = f.file_size();
            if (size == 0) {
                ++corpus.skipped_empty;
                continue;
            }
            files.push_back({f.path(), size});
        }
        if (files.empty()) throw EmptyClass("class directory has no usable files: " + label);

        // Directory iteration order is filesystem-dependent; sort for stable results.
        std::sort(files.begin(), files.end(),
                  [](const FileRef& a, const FileRef& b) { return a.path < b.path; });
        corpus.classes.emplace(label, std::move(files));
    }
    if (corpus.classes.empty())
        throw NoClasses("no class subdirectories under " + root.string());
    return corpus;
}

std::pair<LabeledCorpus, LabeledCorpus> split(const LabeledCorpus& corpus,
                                              std::size_t train_per_class,
                                              std::size_t test_per_class, std::uint64_t seed) {
    LabeledCorpus train;
    LabeledCorpus test;
    const std::size_t need = train_per_class + test_per_class;

    for (const auto& [label, files] : corpus.classes) {
        if (files.size() < need)
            throw InsufficientFiles("class " + label + " has " + std::to_string(files.size()) +
                                    " files, needs " + std::to_string(need));
        std::vector<FileRef> pool = files;
        // Mixing the label into the seed decorrelates per-class draws while
        // keeping the split independent of which other classes are present.
        Rng rng(seed ^ fnv1a64(label));
        rng.shuffle(pool);

        train.classes.emplace(
            label, std::vector<FileRef>(pool.begin(), pool.begin() + train_per_class));
        test.classes.emplace(label,
                             std::vector<FileRef>(pool.begin() + train_per_class,
                                                  pool.begin() + need));
    }
    return {std::move(train), std::move(test)};
}

}  // namespace fileprint
