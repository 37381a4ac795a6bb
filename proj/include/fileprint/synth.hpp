#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fileprint/corpus.hpp"

namespace fileprint {

// Byte-statistics profile of a generated class. Each profile has a byte
// distribution far from every other, so the classes are separable by
// construction:
//   UniformRandom - flat spectrum, i.i.d. bytes
//   AsciiText     - printable characters with English-like letter frequencies
//   Markup        - AsciiText plus heavy '<' '>' '/' '=' '"' mass
//   LowEntropy    - four byte values with fixed weights
//   Sawtooth      - cycles byte values 0..255, repeating value v 1 + v % 4
//                   times, giving the spectrum a toothed ramp
//   Mixed         - first half AsciiText, second half UniformRandom
enum class SynthClass { UniformRandom, AsciiText, Markup, LowEntropy, Sawtooth, Mixed };

struct SynthSpec {
    std::string label;
    SynthClass kind = SynthClass::UniformRandom;
};

// The six built-in classes under their default labels.
std::vector<SynthSpec> default_synth_classes();

// Writes <out_root>/<label>/<NNNN>.bin for every class and returns the
// resulting corpus. File sizes are drawn uniformly from
// [size_min, size_max]. Fully deterministic: the bytes of a file depend only
// on (seed, label, file index). Throws BadSpec on fewer than two classes,
// duplicate or empty labels, files_per_class == 0, or a bad size range;
// IoError if writing fails.
LabeledCorpus synth_corpus(const std::filesystem::path& out_root,
                           const std::vector<SynthSpec>& classes, std::size_t files_per_class,
                           std::uint64_t size_min, std::uint64_t size_max, std::uint64_t seed);

}  // namespace fileprint
