#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "codestab/errors.hpp"
#include "codestab/summation.hpp"
#include "codestab/symbol.hpp"

namespace codestab {

inline constexpr double kDefaultEpsilon = 1e-12;
inline constexpr double kSumTolerance = 1e-9;

template <typename Scalar>
using ProbabilityVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Union of two multisets' symbols, sorted by canonical form.
class JointSupport {
 public:
  explicit JointSupport(std::vector<SubtreeSymbol> sorted_unique_symbols);

  std::size_t size() const noexcept { return symbols_.size(); }
  const SubtreeSymbol& operator[](std::size_t i) const { return symbols_[i]; }
  std::span<const SubtreeSymbol> symbols() const noexcept { return symbols_; }
  std::optional<std::size_t> index_of(const SubtreeSymbol& symbol) const;

  friend bool operator==(const JointSupport&, const JointSupport&) = default;

 private:
  std::vector<SubtreeSymbol> symbols_;
};

using SupportPtr = std::shared_ptr<const JointSupport>;

// Throws EmptyDistribution when either multiset is empty.
SupportPtr joint_support(const SubtreeMultiset& a, const SubtreeMultiset& b);

// Probability vector over a joint support. A smoothed distribution keeps the
// vector it was smoothed from, since JSD is taken on unsmoothed values.
template <typename Scalar = double>
class EmpiricalDistribution {
 public:
  using Vector = ProbabilityVector<Scalar>;

  EmpiricalDistribution(SupportPtr support, Vector probabilities)
      : support_(std::move(support)), probs_(std::move(probabilities)) {
    if (!support_ || static_cast<std::size_t>(probs_.size()) != support_->size()) {
      throw Error(ErrorKind::SupportMismatch,
                  "probability vector length does not match the support");
    }
  }

  EmpiricalDistribution(SupportPtr support, Vector smoothed, Vector unsmoothed,
                        Scalar epsilon)
      : EmpiricalDistribution(std::move(support), std::move(smoothed)) {
    unsmoothed_ = std::move(unsmoothed);
    epsilon_ = epsilon;
  }

  const JointSupport& support() const noexcept { return *support_; }
  const SupportPtr& support_ptr() const noexcept { return support_; }
  const Vector& probabilities() const noexcept { return probs_; }
  const Vector& unsmoothed_probabilities() const noexcept {
    return unsmoothed_ ? *unsmoothed_ : probs_;
  }
  bool smoothed() const noexcept { return unsmoothed_.has_value(); }
  Scalar epsilon() const noexcept { return epsilon_; }
  std::size_t size() const noexcept { return support_->size(); }
  Scalar operator[](std::size_t i) const {
    return probs_(static_cast<Eigen::Index>(i));
  }

 private:
  SupportPtr support_;
  Vector probs_;
  std::optional<Vector> unsmoothed_;
  Scalar epsilon_{0};
};

// Same support object, or equal symbol lists.
template <typename Scalar>
bool share_support(const EmpiricalDistribution<Scalar>& p,
                   const EmpiricalDistribution<Scalar>& q) {
  return p.support_ptr() == q.support_ptr() || p.support() == q.support();
}

template <typename Scalar>
void require_shared_support(const EmpiricalDistribution<Scalar>& p,
                            const EmpiricalDistribution<Scalar>& q) {
  if (!share_support(p, q)) {
    throw Error(ErrorKind::SupportMismatch,
                "distributions are defined over different supports");
  }
}

// P(u) = c(u) / n over the support; symbols absent from the multiset get 0.
// Throws SupportMismatch if the multiset holds a symbol outside the support.
template <typename Scalar = double>
EmpiricalDistribution<Scalar> empirical(const SubtreeMultiset& multiset,
                                        SupportPtr support) {
  if (!support) {
    throw Error(ErrorKind::SupportMismatch, "null support");
  }
  if (multiset.empty()) {
    throw Error(ErrorKind::EmptyDistribution, "empty multiset");
  }
  typename EmpiricalDistribution<Scalar>::Vector probs =
      EmpiricalDistribution<Scalar>::Vector::Zero(
          static_cast<Eigen::Index>(support->size()));
  const Scalar total = static_cast<Scalar>(multiset.total());
  // Both sequences are sorted by canonical form: one merge pass.
  const auto symbols = support->symbols();
  std::size_t i = 0;
  for (const auto& [symbol, count] : multiset) {
    while (i < symbols.size() && symbols[i] < symbol) ++i;
    if (i == symbols.size() || symbols[i] != symbol) {
      throw Error(ErrorKind::SupportMismatch,
                  "symbol missing from support: " + symbol.canonical_form());
    }
    probs(static_cast<Eigen::Index>(i)) = static_cast<Scalar>(count) / total;
  }
  return EmpiricalDistribution<Scalar>(std::move(support), std::move(probs));
}

struct SmoothingOptions {
  // Rescale to sum 1 after flooring; off by default (floor only).
  bool renormalize = false;
  // Size of the source multiset, used only to warn when epsilon >= 1/n.
  std::uint64_t source_total = 0;
};

void warn_large_epsilon(double epsilon, std::uint64_t source_total);

// Q(u) = max(P(u), epsilon). Throws InvalidEpsilon for epsilon <= 0.
template <typename Scalar>
EmpiricalDistribution<Scalar> smooth(const EmpiricalDistribution<Scalar>& dist,
                                     Scalar epsilon,
                                     SmoothingOptions options = {}) {
  if (!(epsilon > Scalar(0))) {
    throw Error(ErrorKind::InvalidEpsilon, "smoothing epsilon must be > 0");
  }
  if (options.source_total > 0) {
    warn_large_epsilon(static_cast<double>(epsilon), options.source_total);
  }
  const auto& base = dist.unsmoothed_probabilities();
  typename EmpiricalDistribution<Scalar>::Vector lifted =
      base.cwiseMax(epsilon);
  if (options.renormalize && (base.array() < epsilon).any()) {
    CompensatedSum<Scalar> sum;
    for (Eigen::Index i = 0; i < lifted.size(); ++i) sum += lifted(i);
    lifted /= sum.value();
  }
  return EmpiricalDistribution<Scalar>(dist.support_ptr(), std::move(lifted),
                                       base, epsilon);
}

}  // namespace codestab
