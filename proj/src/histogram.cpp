#include "fileprint/histogram.hpp"

#include <fstream>
#include <vector>

#include "fileprint/errors.hpp"

namespace fileprint {

void ByteHistogram::add(std::span<const std::uint8_t> data) {
    for (std::uint8_t b : data) ++counts[b];
    total += data.size();
}

void ByteHistogram::merge(const ByteHistogram& other) {
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
    total += other.total;
}

ByteHistogram count_bytes(std::span<const std::uint8_t> data) {
    ByteHistogram hist;
    hist.add(data);
    return hist;
}

ByteHistogram count_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());

    ByteHistogram hist;
    std::vector<char> buffer(1 << 16);
    while (in) {
        in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
        const auto got = in.gcount();
        if (got > 0)
            hist.add({reinterpret_cast<const std::uint8_t*>(buffer.data()),
                      static_cast<std::size_t>(got)});
    }
    if (in.bad()) throw IoError("read failed on " + path.string());
    return hist;
}

NormalizedBfd normalize(const ByteHistogram& hist) {
    if (hist.total == 0) throw EmptyInput("cannot normalize an empty histogram");
    NormalizedBfd bfd;
    const double inv = 1.0 / static_cast<double>(hist.total);
    for (std::size_t i = 0; i < hist.counts.size(); ++i)
        bfd.freq[i] = static_cast<double>(hist.counts[i]) * inv;
    return bfd;
}

}  // namespace fileprint
