#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>

namespace fileprint {

// Raw byte-value counts. Permutation-invariant and additive under
// concatenation: it is the whole reason scrambled or header-stripped files
// classify the same as the originals.
struct ByteHistogram {
    std::array<std::uint64_t, 256> counts{};
    std::uint64_t total = 0;

    void add(std::span<const std::uint8_t> data);
    void merge(const ByteHistogram& other);

    bool operator==(const ByteHistogram&) const = default;
};

// 256-bin relative byte-frequency vector; entries are in [0,1] and sum to 1.
struct NormalizedBfd {
    std::array<double, 256> freq{};

    bool operator==(const NormalizedBfd&) const = default;
};

ByteHistogram count_bytes(std::span<const std::uint8_t> data);

// Streams the file through a fixed-size buffer, so memory use is independent
// of file size. Throws IoError if the file cannot be read.
ByteHistogram count_file(const std::filesystem::path& path);

// counts[i] / total. Throws EmptyInput when total == 0: a zero-length file
// has no distribution to normalize.
NormalizedBfd normalize(const ByteHistogram& hist);

}  // namespace fileprint
