#include "fileprint/histogram.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fileprint/errors.hpp"
#include "fileprint/rng.hpp"
#include "test_util.hpp"

using namespace fileprint;

TEST_CASE("count_bytes matches a naive tally") {
    Rng rng(11);
    const std::vector<std::uint8_t> data = testutil::random_bytes(rng, 4096);

    std::array<std::uint64_t, 256> expected{};
    for (const std::uint8_t b : data) ++expected[b];

    const ByteHistogram hist = count_bytes(data);
    CHECK(hist.total == data.size());
    CHECK(hist.counts == expected);
}

TEST_CASE("histogram is additive under concatenation") {
    Rng rng(12);
    std::vector<std::uint8_t> a = testutil::random_bytes(rng, 1000);
    const std::vector<std::uint8_t> b = testutil::random_bytes(rng, 500);

    ByteHistogram merged = count_bytes(a);
    merged.merge(count_bytes(b));

    std::vector<std::uint8_t> ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    CHECK(merged == count_bytes(ab));

    ByteHistogram incremental;
    incremental.add(a);
    incremental.add(b);
    CHECK(incremental == merged);
}

TEST_CASE("histogram is invariant under byte permutation") {
    Rng rng(13);
    std::vector<std::uint8_t> data = testutil::random_bytes(rng, 2048);
    const ByteHistogram before = count_bytes(data);

    rng.shuffle(data);
    CHECK(count_bytes(data) == before);
}

TEST_CASE("normalized frequencies sum to one") {
    Rng rng(14);
    for (const std::size_t size : {1u, 7u, 255u, 10000u}) {
        const ByteHistogram hist = count_bytes(testutil::random_bytes(rng, size));
        const NormalizedBfd bfd = normalize(hist);

        double sum = 0.0;
        for (const double f : bfd.freq) {
            CHECK(f >= 0.0);
            CHECK(f <= 1.0);
            sum += f;
        }
        CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
}

TEST_CASE("normalize matches counts over total exactly") {
    ByteHistogram hist;
    hist.counts[0] = 3;
    hist.counts[7] = 1;
    hist.counts[255] = 4;
    hist.total = 8;

    const NormalizedBfd bfd = normalize(hist);
    CHECK(bfd.freq[0] == 0.375);
    CHECK(bfd.freq[7] == 0.125);
    CHECK(bfd.freq[255] == 0.5);
    CHECK(bfd.freq[1] == 0.0);
}

TEST_CASE("normalizing an empty histogram throws") {
    CHECK_THROWS_AS(normalize(ByteHistogram{}), EmptyInput);
}

TEST_CASE("count_file streams the same counts as an in-memory tally") {
    const auto dir = testutil::scratch_dir("histogram-file");
    Rng rng(15);
    // Larger than the streaming buffer so more than one read happens.
    const std::vector<std::uint8_t> data = testutil::random_bytes(rng, 200000);
    testutil::write_file(dir / "blob.bin",
                         std::string(reinterpret_cast<const char*>(data.data()), data.size()));

    CHECK(count_file(dir / "blob.bin") == count_bytes(data));
}

TEST_CASE("count_file on a missing path throws") {
    CHECK_THROWS_AS(count_file("no/such/file.bin"), IoError);
}

TEST_CASE("count_file on an empty file yields an empty histogram") {
    const auto dir = testutil::scratch_dir("histogram-empty");
    testutil::write_file(dir / "empty.bin", "");
    const ByteHistogram hist = count_file(dir / "empty.bin");
    CHECK(hist.total == 0);
    CHECK_THROWS_AS(normalize(hist), EmptyInput);
}
