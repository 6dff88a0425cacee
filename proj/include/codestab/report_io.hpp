#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "codestab/harness.hpp"

namespace codestab {

// Pretty-printed JSON with sorted keys; byte-identical for identical reports.
std::string report_to_json(const StabilityReport& report);
// Throws Error(DatasetFormat) for documents that do not look like a report.
StabilityReport report_from_json(std::string_view text);

// One row per scored task: identifiers, pair counts, metric columns, then
// external columns.
std::string tasks_to_csv(const StabilityReport& report);

// Square matrix with a header row and column of metric names; undefined
// entries are empty cells.
std::string correlation_to_csv(const CorrelationMatrix& matrix);

// Shortest representation that round-trips.
std::string format_double(double value);

// Throw Error(Io) on failure.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace codestab
