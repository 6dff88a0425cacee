#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "codestab/errors.hpp"
#include "codestab/harness.hpp"
#include "codestab/summation.hpp"

namespace codestab {

namespace {

constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();

double mean(std::span<const double> v) {
  CompensatedSum<double> sum;
  for (double x : v) sum += x;
  return sum.value() / static_cast<double>(v.size());
}

bool constant(std::span<const double> v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *lo == *hi;
}

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorKind::InsufficientData, "pearson: column lengths differ");
  }
  if (x.size() < 2) {
    throw Error(ErrorKind::InsufficientData,
                "pearson: need at least two observations");
  }
  if (constant(x) || constant(y)) return kUndefined;
  const double mx = mean(x);
  const double my = mean(y);
  CompensatedSum<double> sxy, sxx, syy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  const double r = sxy.value() / std::sqrt(sxx.value() * syy.value());
  return std::clamp(r, -1.0, 1.0);
}

CorrelationMatrix pearson_matrix(std::vector<std::string> names,
                                 const Eigen::MatrixXd& data) {
  if (static_cast<std::size_t>(data.cols()) != names.size()) {
    throw Error(ErrorKind::InvalidConfig,
                "pearson_matrix: one name per column required");
  }
  if (data.rows() < 2) {
    throw Error(ErrorKind::InsufficientData,
                "correlation needs at least two complete rows, got " +
                    std::to_string(data.rows()));
  }
  const Eigen::Index k = data.cols();
  CorrelationMatrix out;
  out.metric_names = std::move(names);
  out.rows_used = static_cast<std::size_t>(data.rows());
  out.entries = Eigen::MatrixXd::Constant(k, k, kUndefined);

  std::vector<std::vector<double>> columns(static_cast<std::size_t>(k));
  for (Eigen::Index c = 0; c < k; ++c) {
    columns[c].assign(data.col(c).data(), data.col(c).data() + data.rows());
  }
  for (Eigen::Index i = 0; i < k; ++i) {
    if (!constant(columns[i])) out.entries(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < k; ++j) {
      const double r = pearson(columns[i], columns[j]);
      out.entries(i, j) = r;
      out.entries(j, i) = r;
    }
  }
  return out;
}

CorrelationMatrix pearson_matrix(const StabilityReport& report,
                                 bool include_external) {
  std::vector<std::string> names = report.config.metric_names();
  if (include_external) {
    std::set<std::string> external;
    for (const auto& t : report.per_task) {
      for (const auto& [name, v] : t.external_metrics) external.insert(name);
    }
    for (const auto& name : external) {
      if (std::find(names.begin(), names.end(), name) == names.end()) {
        names.push_back(name);
      }
    }
  }

  std::vector<std::vector<double>> rows;
  for (const auto& t : report.per_task) {
    std::vector<double> row;
    row.reserve(names.size());
    for (const auto& name : names) {
      if (auto it = t.scores.find(name); it != t.scores.end()) {
        row.push_back(it->second);
      } else if (auto ext = t.external_metrics.find(name);
                 include_external && ext != t.external_metrics.end()) {
        row.push_back(ext->second);
      } else {
        break;
      }
    }
    if (row.size() == names.size()) rows.push_back(std::move(row));
  }

  Eigen::MatrixXd data(static_cast<Eigen::Index>(rows.size()),
                       static_cast<Eigen::Index>(names.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < names.size(); ++c) {
      data(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          rows[r][c];
    }
  }
  return pearson_matrix(std::move(names), data);
}

}  // namespace codestab
