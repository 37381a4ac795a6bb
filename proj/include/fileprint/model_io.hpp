#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "fileprint/pipeline.hpp"

namespace fileprint {

// Canonical JSON document for a model: fixed key order, reals rendered with
// 17 significant digits. Serialization is a pure function of the model, so
// save -> load -> save reproduces the bytes exactly.
std::string model_to_json(const FileprintModel& model);

// Parses and validates a model document. Throws VersionMismatch for an
// unsupported format_version and CorruptModel (with the offending field
// path) for anything malformed.
FileprintModel model_from_json(std::string_view text);

void save_model(const FileprintModel& model, std::ostream& out);
void save_model(const FileprintModel& model, const std::filesystem::path& path);

FileprintModel load_model(std::istream& in);
FileprintModel load_model(const std::filesystem::path& path);

}  // namespace fileprint
