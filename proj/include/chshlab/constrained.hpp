#pragma once

// Four-variable reduction of the eight-variable quantum CHSH expectation.
//
// Four independent singlet pairs n = 1..4 are measured at the angle pairs
// (a1,b1), (a1,b2), (a2,b1), (a2,b2). Their product distribution is
// conditioned on the outcome identifications
//
//   X3 = X1, X2 = X4, Y3 = Y4, Y2 = Y1,
//
// which leaves the four variables X1, Y1, X4, Y4 with values (k1, l1, k4, l4).
// Pair 2 then carries (k4, l1) and pair 3 carries (k1, l4):
//
//   P(k1,l1,k4,l4) ∝ p1(k1,l1) p2(k4,l1) p3(k1,l4) p4(k4,l4),
//
// with p_n(k,l) = (1 + kl q_n)/4 and q_n the singlet correlation of pair n.
// The unnormalized mass is (1 + q1 q2 q3 q4)/16.

#include <chshlab/linalg.hpp>
#include <chshlab/quantum_model.hpp>

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace chshlab {

/// Below this value of 1 + q1 q2 q3 q4 the conditioning event has zero
/// probability and no distribution is defined.
inline constexpr double kDegenerateConditioning = 1e-12;

/// (q1, q2, q3, q4), q_n = -cos 2(alpha^(n) - beta^(n)).
template <typename Scalar>
using CorrelationQuad = Eigen::Matrix<Scalar, 4, 1>;

template <typename Scalar>
using PairIndexMap = std::array<std::pair<Scalar, Scalar>, 4>;

template <typename Scalar>
PairIndexMap<Scalar> pair_index_map(const AngleConfig<Scalar>& c) {
  return {{{c.alpha1, c.beta1}, {c.alpha1, c.beta2}, {c.alpha2, c.beta1}, {c.alpha2, c.beta2}}};
}

template <typename Scalar>
CorrelationQuad<Scalar> correlation_quad(const AngleConfig<Scalar>& c) {
  CorrelationQuad<Scalar> q;
  const auto pairs = pair_index_map(c);
  for (int n = 0; n < 4; ++n) q(n) = singlet_correlation_closed(pairs[n].first, pairs[n].second);
  return q;
}

/// Joint distribution of pair n (1-based).
template <typename Scalar>
PairOutcomeDistribution<Scalar> pair_probabilities(const AngleConfig<Scalar>& c, int n) {
  if (n < 1 || n > 4) throw std::out_of_range("pair_probabilities: pair index must be 1..4");
  const auto pairs = pair_index_map(c);
  return joint_distribution(pairs[n - 1].first, pairs[n - 1].second);
}

/// Sign pattern of the eight-variable sum: + + + -.
template <typename Scalar>
Scalar quantum_eight_variable_sum(const CorrelationQuad<Scalar>& q) {
  return q(0) + q(1) + q(2) - q(3);
}

template <typename Scalar>
struct ConstrainedDistribution {
  /// Index with index(k1, l1, k4, l4).
  Eigen::Matrix<Scalar, 16, 1> probs;
  /// Sum of the unnormalized products, (1 + q1 q2 q3 q4)/16.
  Scalar normalizer{0};

  static constexpr int index(int k1, int l1, int k4, int l4) {
    return (k1 > 0 ? 0 : 8) + (l1 > 0 ? 0 : 4) + (k4 > 0 ? 0 : 2) + (l4 > 0 ? 0 : 1);
  }
  /// Outcome of variable `slot` (0: k1, 1: l1, 2: k4, 3: l4) at table row i.
  static constexpr int outcome(int i, int slot) { return (i >> (3 - slot)) & 1 ? -1 : 1; }

  Scalar operator()(int k1, int l1, int k4, int l4) const { return probs(index(k1, l1, k4, l4)); }

  /// Mean of one of the four surviving variables (slot as in `outcome`).
  Scalar marginal_mean(int slot) const {
    Scalar m = 0;
    for (int i = 0; i < 16; ++i) m += Scalar(outcome(i, slot)) * probs(i);
    return m;
  }
};

/// Builds the conditioned table from four pair distributions.
template <typename Scalar>
ConstrainedDistribution<Scalar> build_constrained(
    const std::array<PairOutcomeDistribution<Scalar>, 4>& pairs) {
  using Dist = ConstrainedDistribution<Scalar>;
  Dist d;
  for (int i = 0; i < 16; ++i) {
    const int k1 = Dist::outcome(i, 0), l1 = Dist::outcome(i, 1);
    const int k4 = Dist::outcome(i, 2), l4 = Dist::outcome(i, 3);
    d.probs(i) = pairs[0](k1, l1) * pairs[1](k4, l1) * pairs[2](k1, l4) * pairs[3](k4, l4);
  }
  d.normalizer = d.probs.sum();
  if (!(Scalar(16) * d.normalizer > Scalar(kDegenerateConditioning)))
    throw NumericalError("constraint event has zero probability");
  d.probs /= d.normalizer;
  return d;
}

/// Variant parameterized directly by correlations; not every q in [-1, 1]^4
/// is reachable from angles.
template <typename Scalar>
ConstrainedDistribution<Scalar> build_constrained(const CorrelationQuad<Scalar>& q) {
  return build_constrained<Scalar>({pair_distribution_from_correlation(q(0)),
                                    pair_distribution_from_correlation(q(1)),
                                    pair_distribution_from_correlation(q(2)),
                                    pair_distribution_from_correlation(q(3))});
}

template <typename Scalar>
ConstrainedDistribution<Scalar> build_constrained(const AngleConfig<Scalar>& c) {
  return build_constrained<Scalar>({pair_probabilities(c, 1), pair_probabilities(c, 2),
                                    pair_probabilities(c, 3), pair_probabilities(c, 4)});
}

/// E[X1Y1 + X1Y4 + X4Y1 - X4Y4] by summation over the 16 outcomes.
template <typename Scalar>
Scalar constrained_expectation_bruteforce(const ConstrainedDistribution<Scalar>& d) {
  using Dist = ConstrainedDistribution<Scalar>;
  Scalar e = 0;
  for (int i = 0; i < 16; ++i) {
    const int k1 = Dist::outcome(i, 0), l1 = Dist::outcome(i, 1);
    const int k4 = Dist::outcome(i, 2), l4 = Dist::outcome(i, 3);
    e += Scalar(k1 * l1 + k1 * l4 + k4 * l1 - k4 * l4) * d.probs(i);
  }
  return e;
}

/// Closed form of the constrained expectation,
///
///   (q1 + q2 + q3 - q4 + q2q3q4 + q1q3q4 + q1q2q4 - q1q2q3) / (1 + q1q2q3q4),
///
/// where the triple products replace Q (1/q1 + 1/q2 + 1/q3 - 1/q4) so that
/// q_n = 0 is regular.
template <typename Scalar>
Scalar constrained_expectation_closed(const CorrelationQuad<Scalar>& q) {
  const Scalar q1 = q(0), q2 = q(1), q3 = q(2), q4 = q(3);
  const Scalar denom = Scalar(1) + q1 * q2 * q3 * q4;
  if (!(denom > Scalar(kDegenerateConditioning)))
    throw NumericalError("constraint event has zero probability");
  const Scalar numer =
      q1 + q2 + q3 - q4 + q2 * q3 * q4 + q1 * q3 * q4 + q1 * q2 * q4 - q1 * q2 * q3;
  return numer / denom;
}

}  // namespace chshlab
