#pragma once

// Information-theoretic scores over probability vectors. All logarithms are
// base 2, so entropies are in bits and the Jensen-Shannon divergence lies in
// [0, 1]. Sums run in support order through a compensated accumulator.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>

#include "codestab/distribution.hpp"
#include "codestab/errors.hpp"
#include "codestab/summation.hpp"

namespace codestab {

enum class MetricKind { StructuralCrossEntropy, JensenShannonSimilarity };

template <typename Scalar = double>
struct MetricScore {
  MetricKind kind;
  Scalar value;
  // Unclamped value; equals `value` unless `clamped`.
  Scalar raw;
  // True when clamping changed the value.
  bool clamped = false;
};

namespace detail {

template <typename A, typename B>
void require_same_length(const Eigen::MatrixBase<A>& p,
                         const Eigen::MatrixBase<B>& q) {
  if (p.size() != q.size()) {
    throw Error(ErrorKind::SupportMismatch,
                "probability vectors have different lengths");
  }
}

template <typename Scalar>
Scalar non_negative(Scalar x) {
  return x > Scalar(0) ? x : Scalar(0);
}

}  // namespace detail

// H(p) = -sum p log2 p, skipping zero entries.
template <typename Derived>
typename Derived::Scalar shannon_entropy(const Eigen::MatrixBase<Derived>& p) {
  using Scalar = typename Derived::Scalar;
  using std::log2;
  CompensatedSum<Scalar> sum;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const Scalar pi = p(i);
    if (pi > Scalar(0)) sum += pi * log2(pi);
  }
  return detail::non_negative(-sum.value());
}

// H(p, q) = -sum p log2 q over entries with p > 0.
// Throws UnsmoothedZero when p > 0 meets q == 0.
template <typename DerivedP, typename DerivedQ>
typename DerivedP::Scalar cross_entropy(const Eigen::MatrixBase<DerivedP>& p,
                                        const Eigen::MatrixBase<DerivedQ>& q) {
  using Scalar = typename DerivedP::Scalar;
  using std::log2;
  detail::require_same_length(p, q);
  CompensatedSum<Scalar> sum;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const Scalar pi = p(i);
    if (!(pi > Scalar(0))) continue;
    const Scalar qi = q(i);
    if (!(qi > Scalar(0))) {
      throw Error(ErrorKind::UnsmoothedZero,
                  "cross-entropy undefined: q(u) = 0 where p(u) > 0; smooth q");
    }
    sum += pi * log2(qi);
  }
  return detail::non_negative(-sum.value());
}

// D_KL(p || q) = H(p, q) - H(p). Smoothing without renormalisation can push
// the difference a hair below zero; it is floored at 0.
template <typename DerivedP, typename DerivedQ>
typename DerivedP::Scalar kl_divergence(const Eigen::MatrixBase<DerivedP>& p,
                                        const Eigen::MatrixBase<DerivedQ>& q) {
  return detail::non_negative(cross_entropy(p, q) - shannon_entropy(p));
}

// Jensen-Shannon divergence, accumulated per entry as
//   p log2(p/m) + q log2(q/m),  m = (p + q) / 2,
// which is non-negative term by term and bitwise symmetric in (p, q).
template <typename DerivedP, typename DerivedQ>
typename DerivedP::Scalar js_divergence(const Eigen::MatrixBase<DerivedP>& p,
                                        const Eigen::MatrixBase<DerivedQ>& q) {
  using Scalar = typename DerivedP::Scalar;
  using std::log2;
  detail::require_same_length(p, q);
  CompensatedSum<Scalar> sum;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const Scalar a = p(i);
    const Scalar b = q(i);
    const Scalar m = (a + b) / Scalar(2);
    if (!(m > Scalar(0))) continue;
    const Scalar ta = a > Scalar(0) ? a * log2(a / m) : Scalar(0);
    const Scalar tb = b > Scalar(0) ? b * log2(b / m) : Scalar(0);
    sum += ta + tb;
  }
  return std::clamp(sum.value() / Scalar(2), Scalar(0), Scalar(1));
}

// H(m) - (H(p) + H(q)) / 2. Algebraically equal to js_divergence; kept as a
// cross-check and not clamped.
template <typename DerivedP, typename DerivedQ>
typename DerivedP::Scalar js_divergence_entropy_form(
    const Eigen::MatrixBase<DerivedP>& p,
    const Eigen::MatrixBase<DerivedQ>& q) {
  using Scalar = typename DerivedP::Scalar;
  detail::require_same_length(p, q);
  const ProbabilityVector<Scalar> m = (p + q) / Scalar(2);
  return shannon_entropy(m) -
         (shannon_entropy(p) + shannon_entropy(q)) / Scalar(2);
}

// Raw H(q) / H(p, q). Throws DegenerateScore when H(p, q) == 0.
template <typename DerivedP, typename DerivedQ>
typename DerivedP::Scalar sce_ratio(const Eigen::MatrixBase<DerivedP>& p,
                                    const Eigen::MatrixBase<DerivedQ>& q) {
  using Scalar = typename DerivedP::Scalar;
  const Scalar hpq = cross_entropy(p, q);
  if (!(hpq > Scalar(0))) {
    throw Error(ErrorKind::DegenerateScore,
                "structural cross-entropy undefined: H(P,Q) = 0");
  }
  return shannon_entropy(q) / hpq;
}

// Distribution-level API.

template <typename Scalar>
Scalar shannon_entropy(const EmpiricalDistribution<Scalar>& p) {
  return shannon_entropy(p.probabilities());
}

template <typename Scalar>
Scalar cross_entropy(const EmpiricalDistribution<Scalar>& p,
                     const EmpiricalDistribution<Scalar>& q) {
  require_shared_support(p, q);
  return cross_entropy(p.probabilities(), q.probabilities());
}

template <typename Scalar>
Scalar kl_divergence(const EmpiricalDistribution<Scalar>& p,
                     const EmpiricalDistribution<Scalar>& q) {
  require_shared_support(p, q);
  return kl_divergence(p.probabilities(), q.probabilities());
}

// Taken on the unsmoothed vectors of both arguments.
template <typename Scalar>
Scalar js_divergence(const EmpiricalDistribution<Scalar>& p,
                     const EmpiricalDistribution<Scalar>& q) {
  require_shared_support(p, q);
  return js_divergence(p.unsmoothed_probabilities(),
                       q.unsmoothed_probabilities());
}

template <typename Scalar>
MetricScore<Scalar> jsd_similarity(const EmpiricalDistribution<Scalar>& p,
                                   const EmpiricalDistribution<Scalar>& q) {
  const Scalar s = Scalar(1) - js_divergence(p, q);
  return {MetricKind::JensenShannonSimilarity, s, s, false};
}

// S_CE = H(Q) / H(P, Q) with P unsmoothed and Q smoothed.
//
// Special cases, decided on the unsmoothed vectors:
//  - P and Q identical: exactly 1.
//  - Q a point mass (H(Q) = 0 before smoothing) and P != Q: 0.
// The raw ratio can exceed 1; with `clamp` the value is capped at 1.
template <typename Scalar>
MetricScore<Scalar> sce_similarity(const EmpiricalDistribution<Scalar>& p,
                                   const EmpiricalDistribution<Scalar>& q,
                                   bool clamp = true) {
  require_shared_support(p, q);
  const auto& p_raw = p.unsmoothed_probabilities();
  const auto& q_raw = q.unsmoothed_probabilities();
  if (p_raw == q_raw) {
    return {MetricKind::StructuralCrossEntropy, Scalar(1), Scalar(1), false};
  }
  if ((q_raw.array() > Scalar(0)).count() == 1) {
    return {MetricKind::StructuralCrossEntropy, Scalar(0), Scalar(0), false};
  }
  const Scalar raw = sce_ratio(p_raw, q.probabilities());
  if (clamp && raw > Scalar(1)) {
    return {MetricKind::StructuralCrossEntropy, Scalar(1), raw, true};
  }
  return {MetricKind::StructuralCrossEntropy, raw, raw, false};
}

}  // namespace codestab
