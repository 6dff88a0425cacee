#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "codestab/harness.hpp"

namespace codestab {

// JSON Lines, one task per line:
//   {"task_id": str, "language": str, "samples": [str, ...],
//    "external_metrics": {str: number}}   (external_metrics optional)
// Blank lines are ignored. Throws DatasetError carrying the 1-based line.
std::vector<TaskRecord> read_dataset_jsonl(std::istream& in);
std::vector<TaskRecord> read_dataset_jsonl(const std::filesystem::path& path);

std::string to_jsonl_line(const TaskRecord& task);

}  // namespace codestab
