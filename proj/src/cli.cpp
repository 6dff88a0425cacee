#include "codestab/cli.hpp"

#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <json.hpp>
#include <ostream>

#include "codestab/dataset_io.hpp"
#include "codestab/errors.hpp"
#include "codestab/grammar.hpp"
#include "codestab/harness.hpp"
#include "codestab/report_io.hpp"
#include "codestab/subtree_codec.hpp"

namespace codestab::cli {

namespace {

struct Options {
  std::string language;
  std::string encoding = "both";
  std::string metric = "both";
  std::string dump_encoding = "structural";
  bool no_clamp = false;
  bool renormalize = false;
  bool no_external = false;
  std::string log_level = "warn";
  std::string file_a, file_b, input, out, csv;
  RunConfig config;
};

void add_language(CLI::App* cmd, Options& o) {
  cmd->add_option("--language,-l", o.language, "Source language")
      ->required()
      ->envname("CODESTAB_LANGUAGE");
}

void add_depth(CLI::App* cmd, Options& o) {
  cmd->add_option("--depth,-d", o.config.depth, "Subtree depth bound")
      ->check(CLI::PositiveNumber)
      ->envname("CODESTAB_DEPTH")
      ->capture_default_str();
}

void add_strict(CLI::App* cmd, Options& o) {
  cmd->add_flag("--strict", o.config.strict_parse,
                "Reject sources containing error-recovery nodes")
      ->envname("CODESTAB_STRICT");
}

void add_scoring(CLI::App* cmd, Options& o) {
  add_depth(cmd, o);
  add_strict(cmd, o);
  cmd->add_option("--epsilon", o.config.epsilon, "Smoothing floor for Q")
      ->check(CLI::PositiveNumber)
      ->envname("CODESTAB_EPSILON")
      ->capture_default_str();
  cmd->add_option("--encoding", o.encoding, "Subtree encoding")
      ->check(CLI::IsMember({"structural", "value", "both"}))
      ->envname("CODESTAB_ENCODING")
      ->capture_default_str();
  cmd->add_option("--metric", o.metric, "Similarity metric")
      ->check(CLI::IsMember({"sce", "jsd", "both"}))
      ->envname("CODESTAB_METRIC")
      ->capture_default_str();
  cmd->add_flag("--no-clamp", o.no_clamp, "Report SCE ratios above 1 as-is")
      ->envname("CODESTAB_NO_CLAMP");
  cmd->add_flag("--renormalize", o.renormalize,
                "Rescale smoothed Q to sum to 1")
      ->envname("CODESTAB_RENORMALIZE");
}

void finish_config(Options& o) {
  RunConfig& c = o.config;
  c.structural = o.encoding != "value";
  c.value = o.encoding != "structural";
  c.sce = o.metric != "jsd";
  c.jsd = o.metric != "sce";
  c.clamp_sce = !o.no_clamp;
  c.renormalize = o.renormalize;
  c.validate();
}

ParseTree parse_file(const GrammarRegistry& grammars, const Options& o,
                     const std::string& path) {
  return grammars.parse(o.language, read_text_file(path),
                        ParseOptions{.strict = o.config.strict_parse});
}

std::string escape_lexeme(std::string_view s) {
  std::string out;
  for (unsigned char c : s) {
    switch (c) {
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      case '\\': out += "\\\\"; break;
      default: out += static_cast<char>(c);
    }
  }
  return out;
}

int cmd_languages(const GrammarRegistry& grammars, std::ostream& out) {
  for (const auto& lang : grammars.languages()) {
    out << lang.name << '\t' << lang.grammar_version << '\n';
  }
  return kOk;
}

int cmd_parse(const GrammarRegistry& grammars, const Options& o,
              std::ostream& out) {
  const ParseTree tree = parse_file(grammars, o, o.input);
  std::vector<std::pair<NodeId, int>> stack{{tree.root(), 0}};
  while (!stack.empty()) {
    const auto [id, level] = stack.back();
    stack.pop_back();
    const Node& n = tree.node(id);
    out << std::string(static_cast<std::size_t>(level) * 2, ' ') << n.node_type
        << " [" << n.lexeme_span.begin << ", " << n.lexeme_span.end << ")";
    if (n.is_error) out << " !error";
    if (n.children.empty()) out << " \"" << escape_lexeme(tree.lexeme(id)) << '"';
    out << '\n';
    for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) {
      stack.emplace_back(*it, level + 1);
    }
  }
  out << "# nodes: " << node_count(tree)
      << ", errors: " << (tree.has_errors() ? "yes" : "no") << '\n';
  return kOk;
}

int cmd_dump_symbols(const GrammarRegistry& grammars, const Options& o,
                     std::ostream& out) {
  const auto scheme = o.dump_encoding == "value" ? EncodingScheme::StructValue
                                            : EncodingScheme::StructOnly;
  const ParseTree tree = parse_file(grammars, o, o.input);
  const auto symbols =
      extract_symbols(tree, DepthBound(o.config.depth), scheme);
  for (const auto& [symbol, count] : symbols) {
    out << count << '\t' << symbol.canonical_form() << '\n';
  }
  return kOk;
}

int cmd_compare(const GrammarRegistry& grammars, const Options& o,
                std::ostream& out) {
  const ParseTree a = parse_file(grammars, o, o.file_a);
  const ParseTree b = parse_file(grammars, o, o.file_b);
  const PairScores scores = score_pair(a, b, o.config);
  nlohmann::json doc = {
      {"file_a", o.file_a},
      {"file_b", o.file_b},
      {"language", o.language},
      {"depth", o.config.depth},
      {"epsilon", o.config.epsilon},
      {"clamp_sce", o.config.clamp_sce},
      {"node_counts", {{"a", node_count(a)}, {"b", node_count(b)}}},
      {"has_errors", {{"a", a.has_errors()}, {"b", b.has_errors()}}},
      {"scores", scores.scores},
      {"raw_scores", scores.raw_scores}};
  out << doc.dump(2, ' ', false, nlohmann::json::error_handler_t::replace)
      << '\n';
  return kOk;
}

int cmd_run(const GrammarRegistry& grammars, const Options& o,
            std::ostream& out) {
  const auto tasks = read_dataset_jsonl(std::filesystem::path(o.input));
  const StabilityReport report = run_dataset(tasks, grammars, o.config, o.input);
  write_text_file(o.out, report_to_json(report));
  if (!o.csv.empty()) write_text_file(o.csv, tasks_to_csv(report));
  out << "tasks scored: " << report.per_task.size()
      << ", skipped: " << report.skipped.size() << '\n';
  for (const auto& [name, value] : report.aggregate) {
    out << name << '\t' << format_double(value) << '\n';
  }
  return kOk;
}

int cmd_correlate(const Options& o, std::ostream& out) {
  const StabilityReport report = report_from_json(read_text_file(o.input));
  const CorrelationMatrix matrix = pearson_matrix(report, !o.no_external);
  const std::string csv = correlation_to_csv(matrix);
  if (o.out.empty()) {
    out << csv;
  } else {
    write_text_file(o.out, csv);
    out << "correlated " << matrix.metric_names.size() << " columns over "
        << matrix.rows_used << " tasks\n";
  }
  return kOk;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnknownLanguage:
    case ErrorKind::InvalidConfig:
    case ErrorKind::InvalidEpsilon:
      return kUsageError;
    case ErrorKind::ParseFailure:
    case ErrorKind::EmptyInput:
      return kParseFailure;
    case ErrorKind::InsufficientData:
    case ErrorKind::EmptyReport:
      return kInsufficientData;
    case ErrorKind::Io:
      return kIoError;
    case ErrorKind::DatasetFormat:
    case ErrorKind::MalformedSymbol:
      return kInvalidInput;
    default:
      return kInternalError;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Structural stability of code samples via AST subtree entropy",
               "codestab"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--log-level", o.log_level, "trace|debug|info|warn|error|off")
      ->envname("CODESTAB_LOG_LEVEL")
      ->capture_default_str();

  auto* languages = app.add_subcommand("languages", "List registered grammars");

  auto* parse = app.add_subcommand("parse", "Print the parse tree of a file");
  parse->add_option("file", o.input, "Source file")->required();
  add_language(parse, o);
  add_strict(parse, o);

  auto* dump = app.add_subcommand(
      "dump-symbols", "Print count<TAB>symbol for every subtree of a file");
  dump->add_option("file", o.input, "Source file")->required();
  add_language(dump, o);
  add_depth(dump, o);
  add_strict(dump, o);
  dump->add_option("--encoding", o.dump_encoding, "Subtree encoding")
      ->check(CLI::IsMember({"structural", "value"}))
      ->envname("CODESTAB_DUMP_ENCODING")
      ->capture_default_str();

  auto* compare = app.add_subcommand(
      "compare", "Score one pair of files (SCE is directed: P = a, Q = b)");
  compare->add_option("file_a", o.file_a, "First file")->required();
  compare->add_option("file_b", o.file_b, "Second file")->required();
  add_language(compare, o);
  add_scoring(compare, o);

  auto* run_cmd = app.add_subcommand("run", "Score a JSONL dataset of tasks");
  run_cmd->add_option("dataset", o.input, "JSONL dataset")->required();
  run_cmd->add_option("--out,-o", o.out, "Report JSON path")->required();
  run_cmd->add_option("--csv", o.csv, "Per-task CSV path");
  run_cmd->add_option("--samples,-k", o.config.samples_per_task,
                      "Samples scored per task")
      ->check(CLI::Range(2, 1 << 20))
      ->envname("CODESTAB_SAMPLES")
      ->capture_default_str();
  run_cmd->add_option("--workers,-j", o.config.workers, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->envname("CODESTAB_WORKERS")
      ->capture_default_str();
  add_scoring(run_cmd, o);

  auto* correlate = app.add_subcommand(
      "correlate", "Pearson matrix between the metric columns of a report");
  correlate->add_option("report", o.input, "Report JSON")->required();
  correlate->add_option("--out,-o", o.out, "CSV path (default: stdout)");
  correlate->add_flag("--no-external", o.no_external,
                      "Ignore ingested external metric columns");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  spdlog::set_level(spdlog::level::from_str(o.log_level));
  try {
    const GrammarRegistry grammars = GrammarRegistry::with_builtin_grammars();
    if (*languages) return cmd_languages(grammars, out);
    if (*parse) return cmd_parse(grammars, o, out);
    if (*dump) return cmd_dump_symbols(grammars, o, out);
    if (*compare || *run_cmd) finish_config(o);
    if (*compare) return cmd_compare(grammars, o, out);
    if (*run_cmd) return cmd_run(grammars, o, out);
    if (*correlate) return cmd_correlate(o, out);
  } catch (const Error& e) {
    err << "codestab: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "codestab: internal error: " << e.what() << '\n';
    return kInternalError;
  }
  return kUsageError;
}

}  // namespace codestab::cli
