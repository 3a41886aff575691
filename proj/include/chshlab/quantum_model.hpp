#pragma once

// Two-photon polarization singlet: analyzer states and observables,
// correlation functions and the Born-rule outcome distribution of a pair.

#include <chshlab/linalg.hpp>
#include <chshlab/random.hpp>

#include <array>
#include <cmath>
#include <stdexcept>

namespace chshlab {

/// Analyzer angles in radians. No normalization is applied; every quantity
/// depending on them is pi-periodic in each angle.
template <typename Scalar>
struct AngleConfig {
  Scalar alpha1{0};
  Scalar alpha2{0};
  Scalar beta1{0};
  Scalar beta2{0};

  bool operator==(const AngleConfig&) const = default;

  bool finite() const {
    return std::isfinite(alpha1) && std::isfinite(alpha2) && std::isfinite(beta1) &&
           std::isfinite(beta2);
  }
};

/// |theta> = cos(theta)|x> + sin(theta)|y>.
template <typename Scalar>
Vector2<Scalar> analyzer_state(Scalar theta) {
  Vector2<Scalar> v;
  v << std::cos(theta), std::sin(theta);
  return v;
}

/// 2|theta><theta| - I, the +-1 valued linear-polarization observable.
template <typename Scalar>
Matrix2<Scalar> analyzer_operator(Scalar theta) {
  const Vector2<Scalar> s = analyzer_state(theta);
  return Scalar(2) * s * s.adjoint() - Matrix2<Scalar>::Identity();
}

/// F(theta) F(theta') - F(theta') F(theta). Proportional to sin 2(theta - theta'),
/// so it vanishes whenever the two angles differ by a multiple of pi/2.
template <typename Scalar>
Matrix2<Scalar> commutator(Scalar theta, Scalar theta_prime) {
  const Matrix2<Scalar> f = analyzer_operator(theta);
  const Matrix2<Scalar> g = analyzer_operator(theta_prime);
  return f * g - g * f;
}

/// (|x_A y_B> - |y_A x_B>)/sqrt(2) in the basis |xx>, |xy>, |yx>, |yy>.
template <typename Scalar>
Vector4<Scalar> singlet_state() {
  const Scalar h = Scalar(1) / std::sqrt(Scalar(2));
  Vector4<Scalar> psi;
  psi << Scalar(0), h, -h, Scalar(0);
  return psi;
}

/// <Psi| A(alpha) (x) B(beta) |Psi>, by explicit matrix arithmetic.
template <typename Scalar>
Scalar singlet_correlation(Scalar alpha, Scalar beta) {
  const Vector4<Scalar> psi = singlet_state<Scalar>();
  const Matrix4<Scalar> c = tensor_product(analyzer_operator(alpha), analyzer_operator(beta));
  return std::real(psi.dot(c * psi));
}

/// -cos 2(alpha - beta).
template <typename Scalar>
Scalar singlet_correlation_closed(Scalar alpha, Scalar beta) {
  return -std::cos(Scalar(2) * (alpha - beta));
}

struct OutcomeRecord {
  int x = 1;
  int y = 1;
};

/// Joint probabilities of a (k, l) outcome pair. Storage order is
/// (+1,+1), (+1,-1), (-1,+1), (-1,-1); this is also the inverse-CDF order
/// used for sampling.
template <typename Scalar>
struct PairOutcomeDistribution {
  std::array<Scalar, 4> probs{};

  static constexpr int index(int k, int l) { return (k > 0 ? 0 : 2) + (l > 0 ? 0 : 1); }
  static constexpr int outcome_k(int i) { return i < 2 ? 1 : -1; }
  static constexpr int outcome_l(int i) { return i % 2 == 0 ? 1 : -1; }

  Scalar operator()(int k, int l) const {
    if ((k != 1 && k != -1) || (l != 1 && l != -1))
      throw std::invalid_argument("PairOutcomeDistribution: outcomes must be +1 or -1");
    return probs[index(k, l)];
  }

  Scalar total() const { return probs[0] + probs[1] + probs[2] + probs[3]; }
  Scalar marginal_x(int k) const { return (*this)(k, 1) + (*this)(k, -1); }
  Scalar marginal_y(int l) const { return (*this)(1, l) + (*this)(-1, l); }

  /// E[XY] by summation over the four outcomes.
  Scalar mean_product() const {
    Scalar e = 0;
    for (int i = 0; i < 4; ++i) e += Scalar(outcome_k(i) * outcome_l(i)) * probs[i];
    return e;
  }

  bool valid(Scalar tol) const {
    for (Scalar p : probs)
      if (!(p >= -tol && p <= Scalar(1) + tol)) return false;
    return std::abs(total() - Scalar(1)) <= tol;
  }
};

/// Distribution with E[XY] = correlation: p(k,l) = (1 + kl * correlation)/4.
template <typename Scalar>
PairOutcomeDistribution<Scalar> pair_distribution_from_correlation(Scalar correlation) {
  PairOutcomeDistribution<Scalar> d;
  for (int i = 0; i < 4; ++i) {
    const int kl = PairOutcomeDistribution<Scalar>::outcome_k(i) *
                   PairOutcomeDistribution<Scalar>::outcome_l(i);
    d.probs[i] = (Scalar(1) + Scalar(kl) * correlation) / Scalar(4);
  }
  return d;
}

/// p(k,l) = (1 - kl cos 2(alpha - beta))/4.
template <typename Scalar>
PairOutcomeDistribution<Scalar> joint_distribution(Scalar alpha, Scalar beta) {
  return pair_distribution_from_correlation(singlet_correlation_closed(alpha, beta));
}

/// One Born-rule draw; consumes exactly one uniform from the stream.
template <typename Scalar>
OutcomeRecord sample_pair(const PairOutcomeDistribution<Scalar>& dist, RandomStream& rng) {
  const double u = rng.uniform();
  double cumulative = 0.0;
  for (int i = 0; i < 3; ++i) {
    cumulative += static_cast<double>(dist.probs[i]);
    if (u < cumulative)
      return {PairOutcomeDistribution<Scalar>::outcome_k(i),
              PairOutcomeDistribution<Scalar>::outcome_l(i)};
  }
  // Rounding can leave u above the accumulated mass; fall back to the last
  // outcome that has support.
  for (int i = 3; i > 0; --i)
    if (dist.probs[i] > Scalar(0))
      return {PairOutcomeDistribution<Scalar>::outcome_k(i),
              PairOutcomeDistribution<Scalar>::outcome_l(i)};
  return {1, 1};
}

}  // namespace chshlab
