#include "fileprint/synth.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <set>
#include <string>

#include "fileprint/errors.hpp"
#include "fileprint/rng.hpp"

namespace fileprint {

namespace {

// English-like letter weights (relative), deliberately steep: a concentrated
// letter distribution keeps the text spectrum far from a flat one, which is
// what separates text — and anything diluted with text — from random bytes.
constexpr std::array<int, 26> kLetterWeight = {743, 58,  148, 282, 1431, 103, 89,
                                               476, 586, 3,   23,  253,  118, 548,
                                               650, 83,  1,   465, 500,  868, 148,
                                               32,  118, 3,   89,  1};

constexpr std::array<char, 10> kPunct = {'.', ',', ';', ':', '!', '?', '\'', '"', '(', ')'};
constexpr std::array<double, 10> kPunctWeight = {0.12, 0.10, 0.05, 0.03, 0.04,
                                                 0.03, 0.03, 0.02, 0.015, 0.015};

constexpr double kTitleRate = 0.30;  // chance a word starts uppercase
constexpr double kPunctRate = 0.45;  // chance a word ends with a mark

// Cumulative distribution over N outcomes from relative weights.
template <std::size_t N, class Weights>
std::array<double, N> cumulative(const Weights& weights) {
    double total = 0.0;
    for (std::size_t i = 0; i < N; ++i) total += weights[i];
    std::array<double, N> cdf;
    double run = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        run += weights[i] / total;
        cdf[i] = run;
    }
    return cdf;
}

template <std::size_t N>
std::size_t sample_index(Rng& rng, const std::array<double, N>& cdf) {
    const double r = rng.unit();
    for (std::size_t i = 0; i + 1 < N; ++i)
        if (r < cdf[i]) return i;
    return N - 1;
}

char sample_letter(Rng& rng) {
    static const std::array<double, 26> cdf = cumulative<26>(kLetterWeight);
    return static_cast<char>('a' + sample_index<26>(rng, cdf));
}

void append_text(Rng& rng, std::string& out, std::size_t until) {
    static const std::array<double, 10> punct_cdf = cumulative<10>(kPunctWeight);
    constexpr std::size_t kWordsPerLine = 12;
    constexpr std::size_t kMaxWordLen = 9;
    std::size_t words_on_line = 0;
    while (out.size() < until) {
        const std::size_t len = 1 + rng.below(kMaxWordLen);
        char first = sample_letter(rng);
        if (rng.unit() < kTitleRate) first = static_cast<char>(first - 'a' + 'A');
        out.push_back(first);
        for (std::size_t i = 1; i < len; ++i) out.push_back(sample_letter(rng));
        if (rng.unit() < kPunctRate) out.push_back(kPunct[sample_index<10>(rng, punct_cdf)]);
        if (++words_on_line >= kWordsPerLine) {
            out.push_back('\n');
            words_on_line = 0;
        } else {
            out.push_back(' ');
        }
    }
    out.resize(until);
}

void append_markup(Rng& rng, std::string& out, std::size_t until) {
    static const char* const kTags[10] = {"p",  "div", "span", "li", "em",
                                          "td", "a",   "ul",   "h2", "b"};
    static const std::array<double, 10> tag_cdf =
        cumulative<10>(std::array<double, 10>{3, 3, 2, 2, 1, 1, 2, 1, 1, 1});
    while (out.size() < until) {
        const char* tag = kTags[sample_index<10>(rng, tag_cdf)];
        out.push_back('<');
        out.append(tag);
        if (rng.unit() < 0.4) {
            out.append(" class=\"");
            const std::size_t len = 2 + rng.below(6);
            for (std::size_t i = 0; i < len; ++i) out.push_back(sample_letter(rng));
            out.push_back('"');
        }
        out.push_back('>');
        append_text(rng, out, std::min(until, out.size() + 18 + rng.below(40)));
        out.append("</");
        out.append(tag);
        out.append(">\n");
    }
    out.resize(until);
}

void generate_file(SynthClass kind, Rng& rng, std::size_t size, std::string& out) {
    out.clear();
    out.reserve(size);
    switch (kind) {
        case SynthClass::UniformRandom:
            for (std::size_t i = 0; i < size; ++i)
                out.push_back(static_cast<char>(rng.below(256)));
            break;
        case SynthClass::AsciiText:
            append_text(rng, out, size);
            break;
        case SynthClass::Markup:
            append_markup(rng, out, size);
            break;
        case SynthClass::LowEntropy: {
            // Eight-value palette dominated by the zero byte; the minor
            // values carry the rest of the mass on a fixed mix.
            static constexpr std::array<unsigned char, 7> kMinors = {0x20, 0x41, 0x7f, 0x80,
                                                                     0xaa, 0xcc, 0xff};
            static const std::array<double, 7> minor_cdf = cumulative<7>(
                std::array<double, 7>{0.12, 0.09, 0.07, 0.06, 0.05, 0.035, 0.025});
            constexpr double kZeroShare = 0.55;
            for (std::size_t i = 0; i < size; ++i) {
                const double r = rng.unit();
                unsigned char b = 0;
                if (r >= kZeroShare) {
                    const double m = (r - kZeroShare) / (1.0 - kZeroShare);
                    b = kMinors[kMinors.size() - 1];
                    for (std::size_t k = 0; k < kMinors.size(); ++k) {
                        if (m < minor_cdf[k]) {
                            b = kMinors[k];
                            break;
                        }
                    }
                }
                out.push_back(static_cast<char>(b));
            }
            break;
        }
        case SynthClass::Sawtooth: {
            // Value v is written 1 + v % 4 times before moving on, so byte
            // frequency climbs with v % 4 in a cyclic period-4 tooth pattern.
            unsigned v = static_cast<unsigned>(rng.below(256));
            while (out.size() < size) {
                const std::size_t reps = 1 + v % 4;
                for (std::size_t r = 0; r < reps && out.size() < size; ++r)
                    out.push_back(static_cast<char>(v));
                v = (v + 1) % 256;
            }
            break;
        }
        case SynthClass::Mixed:
            append_text(rng, out, size / 2);
            while (out.size() < size) out.push_back(static_cast<char>(rng.below(256)));
            break;
    }
}

}  // namespace

std::vector<SynthSpec> default_synth_classes() {
    return {{"uniform-random", SynthClass::UniformRandom},
            {"ascii-text", SynthClass::AsciiText},
            {"markup", SynthClass::Markup},
            {"low-entropy", SynthClass::LowEntropy},
            {"sawtooth", SynthClass::Sawtooth},
            {"mixed", SynthClass::Mixed}};
}

LabeledCorpus synth_corpus(const std::filesystem::path& out_root,
                           const std::vector<SynthSpec>& classes, std::size_t files_per_class,
                           std::uint64_t size_min, std::uint64_t size_max, std::uint64_t seed) {
    if (classes.size() < 2) throw BadSpec("need at least two classes");
    if (files_per_class == 0) throw BadSpec("files_per_class must be positive");
    if (size_min == 0 || size_min > size_max) throw BadSpec("bad size range");
    std::set<std::string> seen;
    for (const SynthSpec& spec : classes) {
        if (spec.label.empty()) throw BadSpec("empty class label");
        if (!seen.insert(spec.label).second) throw BadSpec("duplicate class label: " + spec.label);
    }

    LabeledCorpus corpus;
    std::string buf;
    for (const SynthSpec& spec : classes) {
        const std::filesystem::path dir = out_root / spec.label;
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

        std::vector<FileRef> files;
        const std::uint64_t class_seed = seed ^ fnv1a64(spec.label);
        for (std::size_t i = 0; i < files_per_class; ++i) {
            Rng rng(splitmix64(class_seed + i));
            const std::size_t size =
                static_cast<std::size_t>(size_min + rng.below(size_max - size_min + 1));
            generate_file(spec.kind, rng, size, buf);

            char name[32];
            std::snprintf(name, sizeof(name), "%04zu.bin", i);
            const std::filesystem::path path = dir / name;
            std::ofstream out(path, std::ios::binary | std::ios::trunc);
            if (!out || !out.write(buf.data(), static_cast<std::streamsize>(buf.size())))
                throw IoError("cannot write " + path.string());
            files.push_back({path, buf.size()});
        }
        corpus.classes.emplace(spec.label, std::move(files));
    }
    return corpus;
}

}  // namespace fileprint
