#include "codestab/distribution.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>

namespace codestab {

JointSupport::JointSupport(std::vector<SubtreeSymbol> sorted_unique_symbols)
    : symbols_(std::move(sorted_unique_symbols)) {
  if (symbols_.empty()) {
    throw Error(ErrorKind::EmptyDistribution, "joint support is empty");
  }
  for (std::size_t i = 1; i < symbols_.size(); ++i) {
    if (!(symbols_[i - 1] < symbols_[i])) {
      throw Error(ErrorKind::SupportMismatch,
                  "support symbols must be strictly increasing");
    }
  }
}

std::optional<std::size_t> JointSupport::index_of(
    const SubtreeSymbol& symbol) const {
  auto it = std::lower_bound(symbols_.begin(), symbols_.end(), symbol);
  if (it == symbols_.end() || *it != symbol) return std::nullopt;
  return static_cast<std::size_t>(it - symbols_.begin());
}

SupportPtr joint_support(const SubtreeMultiset& a, const SubtreeMultiset& b) {
  if (a.empty() || b.empty()) {
    throw Error(ErrorKind::EmptyDistribution,
                "cannot build a joint support from an empty multiset");
  }
  std::vector<SubtreeSymbol> merged;
  merged.reserve(a.distinct() + b.distinct());
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      merged.push_back(ia++->first);
    } else if (ia == a.end() || ib->first < ia->first) {
      merged.push_back(ib++->first);
    } else {
      merged.push_back(ia->first);
      ++ia;
      ++ib;
    }
  }
  return std::make_shared<const JointSupport>(std::move(merged));
}

void warn_large_epsilon(double epsilon, std::uint64_t source_total) {
  if (epsilon >= 1.0 / static_cast<double>(source_total)) {
    spdlog::warn(
        "smoothing epsilon {} is not small relative to 1/n = 1/{}; "
        "smoothed mass will be noticeable",
        epsilon, source_total);
  }
}

}  // namespace codestab
