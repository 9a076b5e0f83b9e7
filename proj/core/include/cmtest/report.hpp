#pragma once

#include "cmtest/evaluation.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <string_view>

namespace cmtest {

std::string sha256_hex(std::string_view bytes);

/// Provenance record: hashes of the canonical test spec and colormap text
/// plus the evaluation options.
nlohmann::json provenance_json(const EvaluationBundle& bundle);

/// Writes a report directory:
///   value.csv color.csv subtraction.csv   aggregated fields
///   value.png color.png subtraction.png grayscale.png mapped.png
///   statistics.json provenance.json colormap.json
/// The directory is assembled next to `dir` and renamed into place. An
/// existing earlier report at `dir` is replaced; any other existing
/// non-empty directory raises IoError.
void write_report(const EvaluationBundle& bundle, const std::filesystem::path& dir);

/// Reads statistics.json and provenance.json back from a report directory.
nlohmann::json read_report(const std::filesystem::path& dir);

} // namespace cmtest
