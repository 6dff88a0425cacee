#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "codestab/distribution.hpp"
#include "codestab/grammar.hpp"
#include "codestab/subtree_codec.hpp"

namespace codestab {

// Metric column names used in reports and correlation matrices.
inline constexpr const char* kSce = "sce";
inline constexpr const char* kSceStructural = "sce_structural";
inline constexpr const char* kJsd = "jsd";
inline constexpr const char* kJsdStructural = "jsd_structural";

struct RunConfig {
  int depth = 1;
  double epsilon = kDefaultEpsilon;
  bool renormalize = false;
  bool structural = true;  // StructOnly encoding
  bool value = true;       // StructValue encoding
  bool sce = true;
  bool jsd = true;
  bool clamp_sce = true;
  bool strict_parse = false;
  unsigned workers = 1;
  // Samples scored per task; extra samples are ignored.
  std::size_t samples_per_task = 5;

  // Throws Error(InvalidConfig).
  void validate() const;
  // Requested metric columns, sorted.
  std::vector<std::string> metric_names() const;
};

struct TaskRecord {
  std::string task_id;
  std::string language;
  std::vector<std::string> samples;
  std::map<std::string, double> external_metrics;
};

struct TaskScore {
  std::string task_id;
  std::string language;
  // Metric column -> mean pairwise similarity in [0, 1].
  std::map<std::string, double> scores;
  // SCE columns only: mean of the unclamped ratios.
  std::map<std::string, double> raw_scores;
  std::size_t samples_scored = 0;
  std::size_t unordered_pairs = 0;  // averaged for JSD
  std::size_t ordered_pairs = 0;    // averaged for SCE
  std::size_t parse_failures = 0;
  std::vector<std::string> diagnostics;
  std::map<std::string, double> external_metrics;

  friend bool operator==(const TaskScore&, const TaskScore&) = default;
};

struct SkippedTask {
  std::string task_id;
  std::string reason;
  std::size_t parse_failures = 0;
  std::vector<std::string> diagnostics;

  friend bool operator==(const SkippedTask&, const SkippedTask&) = default;
};

using TaskOutcome = std::variant<TaskScore, SkippedTask>;

struct Provenance {
  std::string dataset;
  // Language name -> grammar version, for every language in the dataset.
  std::map<std::string, std::string> grammars;
};

struct StabilityReport {
  std::vector<TaskScore> per_task;  // sorted by task_id
  std::vector<SkippedTask> skipped; // sorted by task_id
  std::map<std::string, double> aggregate;
  RunConfig config;
  Provenance provenance;
};

// Mean pairwise similarities among the samples of one task. Samples that fail
// to parse are dropped and counted; with fewer than two left the task is
// skipped. Throws UnknownLanguage for unregistered languages.
TaskOutcome score_task(const TaskRecord& task, const GrammarRegistry& grammars,
                       const RunConfig& config);

// Scores every task (in parallel when config.workers > 1) and averages the
// per-task scores. Throws DatasetFormat on duplicate task ids, EmptyReport
// when no task could be scored.
StabilityReport run_dataset(std::span<const TaskRecord> dataset,
                            const GrammarRegistry& grammars,
                            const RunConfig& config,
                            std::string dataset_label = {});

// Pairwise scores for two pre-parsed trees; used by the `compare` command.
struct PairScores {
  std::map<std::string, double> scores;
  std::map<std::string, double> raw_scores;
};
PairScores score_pair(const ParseTree& a, const ParseTree& b,
                      const RunConfig& config);

// Pearson correlations between columns. NaN marks undefined entries (a
// column with zero variance), diagonal included.
struct CorrelationMatrix {
  std::vector<std::string> metric_names;
  Eigen::MatrixXd entries;
  std::size_t rows_used = 0;
};

// Columns of `data` are variables, rows observations. Throws InsufficientData
// for fewer than two rows.
CorrelationMatrix pearson_matrix(std::vector<std::string> names,
                                 const Eigen::MatrixXd& data);

// Metric columns of the report (plus ingested external columns when
// requested), over tasks where every selected column is present.
CorrelationMatrix pearson_matrix(const StabilityReport& report,
                                 bool include_external);

double pearson(std::span<const double> x, std::span<const double> y);

}  // namespace codestab
