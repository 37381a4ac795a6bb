#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace fileprint {

struct FileRef {
    std::filesystem::path path;
    std::uint64_t size = 0;
};

// Sample files grouped by class label. The map's lexicographic label order is
// the canonical class order everywhere downstream.
struct LabeledCorpus {
    std::map<std::string, std::vector<FileRef>> classes;
    std::size_t skipped_empty = 0;  // zero-length files dropped while loading

    std::vector<std::string> labels() const;
    std::size_t file_count() const;
};

// Layout: <root>/<class-name>/<files...>. Each immediate subdirectory is one
// class; regular files directly inside it are the samples. Zero-length files
// are skipped and counted in skipped_empty. Throws NoClasses if root has no
// subdirectories and EmptyClass if a class ends up with no usable file.
LabeledCorpus load_corpus(const std::filesystem::path& root);

// Deterministic per-class split. File names are sorted, then shuffled with a
// generator seeded from (seed, label); the first train_per_class go to the
// train corpus and the next test_per_class to the test corpus. Throws
// InsufficientFiles naming the class that is too small.
std::pair<LabeledCorpus, LabeledCorpus> split(const LabeledCorpus& corpus,
                                              std::size_t train_per_class,
                                              std::size_t test_per_class, std::uint64_t seed);

}  // namespace fileprint
