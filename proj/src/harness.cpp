#include "codestab/harness.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <optional>
#include <set>
#include <thread>

#include "codestab/errors.hpp"
#include "codestab/metrics.hpp"

namespace codestab {

void RunConfig::validate() const {
  auto invalid = [](const std::string& why) {
    throw Error(ErrorKind::InvalidConfig, why);
  };
  if (depth < 1) invalid("depth must be >= 1");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorKind::InvalidEpsilon, "epsilon must be a positive number");
  }
  if (!structural && !value) invalid("at least one encoding must be selected");
  if (!sce && !jsd) invalid("at least one metric must be selected");
  if (workers < 1) invalid("workers must be >= 1");
  if (samples_per_task < 2) invalid("samples per task must be >= 2");
}

std::vector<std::string> RunConfig::metric_names() const {
  std::vector<std::string> names;
  if (jsd && value) names.emplace_back(kJsd);
  if (jsd && structural) names.emplace_back(kJsdStructural);
  if (sce && value) names.emplace_back(kSce);
  if (sce && structural) names.emplace_back(kSceStructural);
  std::sort(names.begin(), names.end());
  return names;
}

namespace {

struct EncodingColumns {
  EncodingScheme scheme;
  const char* jsd;
  const char* sce;
};

std::vector<EncodingColumns> selected_encodings(const RunConfig& config) {
  std::vector<EncodingColumns> out;
  if (config.value) out.push_back({EncodingScheme::StructValue, kJsd, kSce});
  if (config.structural) {
    out.push_back({EncodingScheme::StructOnly, kJsdStructural, kSceStructural});
  }
  return out;
}

// Sorting first makes the mean independent of the order pairs were visited.
double order_free_mean(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  CompensatedSum<double> sum;
  for (double v : values) sum += v;
  return sum.value() / static_cast<double>(values.size());
}

struct PairValues {
  std::vector<double> jsd;
  std::vector<double> sce;
  std::vector<double> sce_raw;
};

void score_one_direction(const EmpiricalDistribution<double>& p,
                         const EmpiricalDistribution<double>& q_unsmoothed,
                         const RunConfig& config, PairValues& out) {
  const auto q = smooth(q_unsmoothed, config.epsilon,
                        SmoothingOptions{.renormalize = config.renormalize});
  const auto s = sce_similarity(p, q, config.clamp_sce);
  out.sce.push_back(s.value);
  out.sce_raw.push_back(s.raw);
}

// JSD over unordered pairs i < j, SCE over both directions of each pair.
PairValues score_all_pairs(std::span<const SubtreeMultiset> sets,
                           const RunConfig& config) {
  PairValues out;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      const SupportPtr support = joint_support(sets[i], sets[j]);
      const auto pi = empirical<double>(sets[i], support);
      const auto pj = empirical<double>(sets[j], support);
      if (config.jsd) out.jsd.push_back(jsd_similarity(pi, pj).value);
      if (config.sce) {
        score_one_direction(pi, pj, config, out);
        score_one_direction(pj, pi, config, out);
      }
    }
  }
  return out;
}

void warn_if_epsilon_large(const RunConfig& config,
                           std::span<const ParseTree> trees,
                           const std::string& task_id) {
  std::size_t smallest = trees.front().size();
  for (const auto& t : trees) smallest = std::min(smallest, t.size());
  if (config.sce && config.epsilon >= 1.0 / static_cast<double>(smallest)) {
    spdlog::warn("task {}: epsilon {} >= 1/n for a sample with {} nodes",
                 task_id, config.epsilon, smallest);
  }
}

}  // namespace

TaskOutcome score_task(const TaskRecord& task, const GrammarRegistry& grammars,
                       const RunConfig& config) {
  config.validate();
  grammars.language(task.language);  // UnknownLanguage

  std::vector<std::string> diagnostics;
  std::size_t used = task.samples.size();
  if (used > config.samples_per_task) {
    diagnostics.push_back("using the first " +
                          std::to_string(config.samples_per_task) + " of " +
                          std::to_string(used) + " samples");
    spdlog::warn("task {}: {}", task.task_id, diagnostics.back());
    used = config.samples_per_task;
  }

  std::vector<ParseTree> trees;
  std::size_t failures = 0;
  const ParseOptions options{.strict = config.strict_parse};
  for (std::size_t i = 0; i < used; ++i) {
    try {
      trees.push_back(grammars.parse(task.language, task.samples[i], options));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ParseFailure &&
          e.kind() != ErrorKind::EmptyInput) {
        throw;
      }
      ++failures;
      diagnostics.push_back("sample " + std::to_string(i) + ": " + e.what());
      spdlog::warn("task {}: dropping {}", task.task_id, diagnostics.back());
    }
  }

  if (trees.size() < 2) {
    return SkippedTask{task.task_id,
                       "fewer than 2 parseable samples (" +
                           std::to_string(trees.size()) + " of " +
                           std::to_string(used) + ")",
                       failures, std::move(diagnostics)};
  }
  warn_if_epsilon_large(config, trees, task.task_id);

  TaskScore score;
  score.task_id = task.task_id;
  score.language = task.language;
  score.samples_scored = trees.size();
  score.unordered_pairs = trees.size() * (trees.size() - 1) / 2;
  score.ordered_pairs = trees.size() * (trees.size() - 1);
  score.parse_failures = failures;
  score.diagnostics = std::move(diagnostics);
  score.external_metrics = task.external_metrics;

  const DepthBound depth(config.depth);
  for (const auto& enc : selected_encodings(config)) {
    std::vector<SubtreeMultiset> sets;
    sets.reserve(trees.size());
    for (const auto& t : trees) {
      sets.push_back(extract_symbols(t, depth, enc.scheme));
    }
    PairValues values = score_all_pairs(sets, config);
    if (config.jsd) score.scores[enc.jsd] = order_free_mean(values.jsd);
    if (config.sce) {
      score.scores[enc.sce] = order_free_mean(values.sce);
      score.raw_scores[enc.sce] = order_free_mean(values.sce_raw);
    }
  }
  return score;
}

PairScores score_pair(const ParseTree& a, const ParseTree& b,
                      const RunConfig& config) {
  config.validate();
  PairScores out;
  const DepthBound depth(config.depth);
  for (const auto& enc : selected_encodings(config)) {
    const auto sa = extract_symbols(a, depth, enc.scheme);
    const auto sb = extract_symbols(b, depth, enc.scheme);
    const SupportPtr support = joint_support(sa, sb);
    const auto p = empirical<double>(sa, support);
    const auto q = empirical<double>(sb, support);
    if (config.jsd) out.scores[enc.jsd] = jsd_similarity(p, q).value;
    if (config.sce) {
      const auto qs =
          smooth(q, config.epsilon,
                 SmoothingOptions{.renormalize = config.renormalize,
                                  .source_total = sb.total()});
      const auto s = sce_similarity(p, qs, config.clamp_sce);
      out.scores[enc.sce] = s.value;
      out.raw_scores[enc.sce] = s.raw;
    }
  }
  return out;
}

StabilityReport run_dataset(std::span<const TaskRecord> dataset,
                            const GrammarRegistry& grammars,
                            const RunConfig& config,
                            std::string dataset_label) {
  config.validate();
  if (dataset.empty()) {
    throw Error(ErrorKind::EmptyReport, "dataset contains no tasks");
  }

  StabilityReport report;
  report.config = config;
  report.provenance.dataset = std::move(dataset_label);
  std::set<std::string> ids;
  for (const auto& task : dataset) {
    if (task.task_id.empty()) {
      throw Error(ErrorKind::DatasetFormat, "task with empty task_id");
    }
    if (!ids.insert(task.task_id).second) {
      throw Error(ErrorKind::DatasetFormat,
                  "duplicate task_id '" + task.task_id + "'");
    }
    report.provenance.grammars[task.language] =
        grammars.language(task.language).grammar_version;
  }

  std::vector<std::optional<TaskOutcome>> outcomes(dataset.size());
  std::vector<std::exception_ptr> errors(dataset.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < dataset.size(); i = next++) {
      try {
        outcomes[i] = score_task(dataset[i], grammars, config);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t nworkers =
      std::min<std::size_t>(config.workers, dataset.size());
  if (nworkers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(nworkers);
    for (std::size_t w = 0; w < nworkers; ++w) pool.emplace_back(work);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  for (auto& outcome : outcomes) {
    if (auto* s = std::get_if<TaskScore>(&*outcome)) {
      report.per_task.push_back(std::move(*s));
    } else {
      report.skipped.push_back(std::get<SkippedTask>(std::move(*outcome)));
    }
  }
  auto by_id = [](const auto& a, const auto& b) { return a.task_id < b.task_id; };
  std::sort(report.per_task.begin(), report.per_task.end(), by_id);
  std::sort(report.skipped.begin(), report.skipped.end(), by_id);

  if (report.per_task.empty()) {
    throw Error(ErrorKind::EmptyReport,
                "no task had at least two parseable samples");
  }
  for (const auto& name : config.metric_names()) {
    CompensatedSum<double> sum;
    for (const auto& t : report.per_task) sum += t.scores.at(name);
    report.aggregate[name] =
        sum.value() / static_cast<double>(report.per_task.size());
  }
  return report;
}

}  // namespace codestab
