#include "codestab/dataset_io.hpp"

#include <fstream>
#include <istream>
#include <json.hpp>

#include "codestab/errors.hpp"

namespace codestab {

namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw DatasetError(line, std::string("missing field '") + key + "'");
  }
  return *it;
}

std::string require_string(const json& obj, const char* key, std::size_t line) {
  const json& v = require(obj, key, line);
  if (!v.is_string() || v.get_ref<const std::string&>().empty()) {
    throw DatasetError(line,
                       std::string("field '") + key + "' must be a non-empty string");
  }
  return v.get<std::string>();
}

TaskRecord parse_record(const std::string& text, std::size_t line) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DatasetError(line, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw DatasetError(line, "expected a JSON object");

  TaskRecord task;
  task.task_id = require_string(doc, "task_id", line);
  task.language = require_string(doc, "language", line);
  const json& samples = require(doc, "samples", line);
  if (!samples.is_array()) {
    throw DatasetError(line, "field 'samples' must be an array of strings");
  }
  for (const auto& s : samples) {
    if (!s.is_string()) {
      throw DatasetError(line, "field 'samples' must be an array of strings");
    }
    task.samples.push_back(s.get<std::string>());
  }
  if (task.samples.size() < 2) {
    throw DatasetError(line, "a task needs at least 2 samples");
  }
  if (auto it = doc.find("external_metrics");
      it != doc.end() && !it->is_null()) {
    if (!it->is_object()) {
      throw DatasetError(line, "field 'external_metrics' must be an object");
    }
    for (const auto& [name, value] : it->items()) {
      if (!value.is_number()) {
        throw DatasetError(line, "external metric '" + name + "' is not a number");
      }
      task.external_metrics[name] = value.get<double>();
    }
  }
  return task;
}

}  // namespace

std::vector<TaskRecord> read_dataset_jsonl(std::istream& in) {
  std::vector<TaskRecord> tasks;
  std::string text;
  for (std::size_t line = 1; std::getline(in, text); ++line) {
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    tasks.push_back(parse_record(text, line));
  }
  return tasks;
}

std::vector<TaskRecord> read_dataset_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::Io, "cannot open dataset '" + path.string() + "'");
  }
  return read_dataset_jsonl(in);
}

std::string to_jsonl_line(const TaskRecord& task) {
  json doc = {{"task_id", task.task_id},
              {"language", task.language},
              {"samples", task.samples}};
  if (!task.external_metrics.empty()) {
    doc["external_metrics"] = task.external_metrics;
  }
  return doc.dump();
}

}  // namespace codestab
