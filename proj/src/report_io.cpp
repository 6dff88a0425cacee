#include "codestab/report_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "codestab/errors.hpp"

namespace codestab {

namespace {

using nlohmann::json;

json config_to_json(const RunConfig& c) {
  json encodings = json::array();
  if (c.structural) encodings.push_back("structural");
  if (c.value) encodings.push_back("value");
  json metrics = json::array();
  if (c.jsd) metrics.push_back("jsd");
  if (c.sce) metrics.push_back("sce");
  return {{"depth", c.depth},
          {"epsilon", c.epsilon},
          {"renormalize", c.renormalize},
          {"encodings", encodings},
          {"metrics", metrics},
          {"clamp_sce", c.clamp_sce},
          {"strict_parse", c.strict_parse},
          {"samples_per_task", c.samples_per_task},
          {"workers", c.workers}};
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  c.depth = j.at("depth").get<int>();
  c.epsilon = j.at("epsilon").get<double>();
  c.renormalize = j.value("renormalize", false);
  c.clamp_sce = j.value("clamp_sce", true);
  c.strict_parse = j.value("strict_parse", false);
  c.samples_per_task = j.value("samples_per_task", std::size_t{5});
  c.workers = j.value("workers", 1u);
  const auto encodings = j.at("encodings").get<std::vector<std::string>>();
  const auto metrics = j.at("metrics").get<std::vector<std::string>>();
  auto has = [](const std::vector<std::string>& v, const char* s) {
    return std::find(v.begin(), v.end(), s) != v.end();
  };
  c.structural = has(encodings, "structural");
  c.value = has(encodings, "value");
  c.jsd = has(metrics, "jsd");
  c.sce = has(metrics, "sce");
  return c;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(s);
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string report_to_json(const StabilityReport& report) {
  json tasks = json::array();
  for (const auto& t : report.per_task) {
    tasks.push_back({{"task_id", t.task_id},
                     {"language", t.language},
                     {"scores", t.scores},
                     {"raw_scores", t.raw_scores},
                     {"samples_scored", t.samples_scored},
                     {"unordered_pairs", t.unordered_pairs},
                     {"ordered_pairs", t.ordered_pairs},
                     {"parse_failures", t.parse_failures},
                     {"diagnostics", t.diagnostics},
                     {"external_metrics", t.external_metrics}});
  }
  json skipped = json::array();
  for (const auto& s : report.skipped) {
    skipped.push_back({{"task_id", s.task_id},
                       {"reason", s.reason},
                       {"parse_failures", s.parse_failures},
                       {"diagnostics", s.diagnostics}});
  }
  const json doc = {
      {"config", config_to_json(report.config)},
      {"provenance",
       {{"dataset", report.provenance.dataset},
        {"grammars", report.provenance.grammars}}},
      {"aggregate", report.aggregate},
      {"tasks", tasks},
      {"skipped", skipped}};
  return doc.dump(2, ' ', false, json::error_handler_t::replace) + "\n";
}

StabilityReport report_from_json(std::string_view text) {
  StabilityReport report;
  try {
    const json doc = json::parse(text);
    report.config = config_from_json(doc.at("config"));
    const json& prov = doc.at("provenance");
    report.provenance.dataset = prov.value("dataset", std::string{});
    report.provenance.grammars =
        prov.value("grammars", std::map<std::string, std::string>{});
    report.aggregate = doc.at("aggregate").get<std::map<std::string, double>>();
    for (const auto& t : doc.at("tasks")) {
      TaskScore s;
      s.task_id = t.at("task_id").get<std::string>();
      s.language = t.value("language", std::string{});
      s.scores = t.at("scores").get<std::map<std::string, double>>();
      s.raw_scores = t.value("raw_scores", std::map<std::string, double>{});
      s.samples_scored = t.value("samples_scored", std::size_t{0});
      s.unordered_pairs = t.value("unordered_pairs", std::size_t{0});
      s.ordered_pairs = t.value("ordered_pairs", std::size_t{0});
      s.parse_failures = t.value("parse_failures", std::size_t{0});
      s.diagnostics = t.value("diagnostics", std::vector<std::string>{});
      s.external_metrics =
          t.value("external_metrics", std::map<std::string, double>{});
      report.per_task.push_back(std::move(s));
    }
    for (const auto& t : doc.value("skipped", json::array())) {
      SkippedTask s;
      s.task_id = t.at("task_id").get<std::string>();
      s.reason = t.value("reason", std::string{});
      s.parse_failures = t.value("parse_failures", std::size_t{0});
      s.diagnostics = t.value("diagnostics", std::vector<std::string>{});
      report.skipped.push_back(std::move(s));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::DatasetFormat,
                std::string("not a stability report: ") + e.what());
  }
  return report;
}

std::string tasks_to_csv(const StabilityReport& report) {
  const auto metrics = report.config.metric_names();
  std::set<std::string> external;
  for (const auto& t : report.per_task) {
    for (const auto& [name, v] : t.external_metrics) external.insert(name);
  }
  std::ostringstream out;
  out << "task_id,language,samples_scored,unordered_pairs,ordered_pairs,"
         "parse_failures";
  for (const auto& m : metrics) out << ',' << csv_field(m);
  for (const auto& m : external) out << ',' << csv_field(m);
  out << '\n';
  for (const auto& t : report.per_task) {
    out << csv_field(t.task_id) << ',' << csv_field(t.language) << ','
        << t.samples_scored << ',' << t.unordered_pairs << ','
        << t.ordered_pairs << ',' << t.parse_failures;
    for (const auto& m : metrics) {
      out << ',';
      if (auto it = t.scores.find(m); it != t.scores.end()) {
        out << format_double(it->second);
      }
    }
    for (const auto& m : external) {
      out << ',';
      if (auto it = t.external_metrics.find(m); it != t.external_metrics.end()) {
        out << format_double(it->second);
      }
    }
    out << '\n';
  }
  return out.str();
}

std::string correlation_to_csv(const CorrelationMatrix& matrix) {
  std::ostringstream out;
  out << "metric";
  for (const auto& name : matrix.metric_names) out << ',' << csv_field(name);
  out << '\n';
  for (std::size_t i = 0; i < matrix.metric_names.size(); ++i) {
    out << csv_field(matrix.metric_names[i]);
    for (std::size_t j = 0; j < matrix.metric_names.size(); ++j) {
      out << ',';
      const double v = matrix.entries(static_cast<Eigen::Index>(i),
                                      static_cast<Eigen::Index>(j));
      if (!std::isnan(v)) out << format_double(v);
    }
    out << '\n';
  }
  return out.str();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::Io, "cannot read '" + path.string() + "'");
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
}

}  // namespace codestab
