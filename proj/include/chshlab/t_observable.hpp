#pragma once

// The CHSH operator
//
//   T = A(a1)B(b1) + A(a1)B(b2) + A(a2)B(b1) - A(a2)B(b2)
//
// measured as a single observable on the singlet. Its spectrum is
// {+-t0, +-t1} with
//
//   t0 = 2 sqrt(1 - sin 2(a1 - a2) sin 2(b1 - b2)),
//
// and the singlet lies entirely in the +-t0 eigenspaces, so T takes only the
// values +-t0 on it with weights (1 +- E/t0)/2, E = <Psi|T|Psi>.
//
// t1 is computed numerically. Squaring T gives
// T^2 = 4 - [A1,A2](x)[B1,B2], which suggests
// t1 = 2 sqrt(1 + sin 2(a1 - a2) sin 2(b1 - b2)); `t1_conjectured` exposes
// that expression and the tests compare it with the eigensolver.

#include <chshlab/linalg.hpp>
#include <chshlab/quantum_model.hpp>
#include <chshlab/random.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace chshlab {

inline constexpr double kPairMatchTol = 1e-9;
inline constexpr double kVanishingT0 = 1e-12;

template <typename Scalar>
struct ChshOperator {
  AngleConfig<Scalar> config;
  Matrix4<Scalar> matrix;
};

template <typename Scalar>
ChshOperator<Scalar> build_t(const AngleConfig<Scalar>& c) {
  const Matrix2<Scalar> a1 = analyzer_operator(c.alpha1);
  const Matrix2<Scalar> a2 = analyzer_operator(c.alpha2);
  const Matrix2<Scalar> b1 = analyzer_operator(c.beta1);
  const Matrix2<Scalar> b2 = analyzer_operator(c.beta2);
  return {c, tensor_product(a1, b1) + tensor_product(a1, b2) + tensor_product(a2, b1) -
                 tensor_product(a2, b2)};
}

template <typename Scalar>
Scalar t0_closed(const AngleConfig<Scalar>& c) {
  const Scalar radicand = Scalar(1) - std::sin(Scalar(2) * (c.alpha1 - c.alpha2)) *
                                          std::sin(Scalar(2) * (c.beta1 - c.beta2));
  return Scalar(2) * std::sqrt(std::max(radicand, Scalar(0)));
}

template <typename Scalar>
Scalar t1_conjectured(const AngleConfig<Scalar>& c) {
  const Scalar radicand = Scalar(1) + std::sin(Scalar(2) * (c.alpha1 - c.alpha2)) *
                                          std::sin(Scalar(2) * (c.beta1 - c.beta2));
  return Scalar(2) * std::sqrt(std::max(radicand, Scalar(0)));
}

/// E = -cos 2(a1-b1) - cos 2(a1-b2) - cos 2(a2-b1) + cos 2(a2-b2).
template <typename Scalar>
Scalar t_mean(const AngleConfig<Scalar>& c) {
  using std::cos;
  const Scalar two(2);
  return -cos(two * (c.alpha1 - c.beta1)) - cos(two * (c.alpha1 - c.beta2)) -
         cos(two * (c.alpha2 - c.beta1)) + cos(two * (c.alpha2 - c.beta2));
}

/// <Psi|T|Psi> by matrix arithmetic.
template <typename Scalar>
Scalar t_mean_matrix(const ChshOperator<Scalar>& op) {
  const Vector4<Scalar> psi = singlet_state<Scalar>();
  return std::real(psi.dot(op.matrix * psi));
}

template <typename Scalar>
struct TSpectralSummary {
  Scalar t0{0};
  Scalar t1{0};
  Scalar mean{0};
  SpectralDecomposition<Scalar> eigen;
  /// Columns of `eigen` belonging to +-t1, valid when t0 and t1 are separated.
  std::array<int, 2> t1_columns{-1, -1};
  bool degenerate = false;
};

template <typename Scalar>
TSpectralSummary<Scalar> t_spectrum(const ChshOperator<Scalar>& op, Scalar tol = Scalar(1e-13)) {
  TSpectralSummary<Scalar> s;
  s.eigen = hermitian_eigen(op.matrix, tol);
  const auto& ev = s.eigen.eigenvalues;
  const Scalar pair_tol(kPairMatchTol);
  if (std::abs(ev[0] + ev[3]) > pair_tol || std::abs(ev[1] + ev[2]) > pair_tol)
    throw NumericalError("t_spectrum: eigenvalues are not symmetric about zero");

  s.t0 = t0_closed(op.config);
  s.mean = t_mean(op.config);
  const Scalar outer = (ev[3] - ev[0]) / Scalar(2);
  const Scalar inner = (ev[2] - ev[1]) / Scalar(2);
  if (std::abs(outer - s.t0) <= pair_tol) {
    s.t1 = inner;
    s.t1_columns = {1, 2};
  } else if (std::abs(inner - s.t0) <= pair_tol) {
    s.t1 = outer;
    s.t1_columns = {0, 3};
  } else {
    throw NumericalError("t_spectrum: no eigenvalue pair matches t0");
  }
  s.degenerate = std::abs(s.t0 - s.t1) < Scalar(kDegenerateGap);
  return s;
}

template <typename Scalar>
struct TOutcomeDistribution {
  Scalar t0{0};
  Scalar weight_plus{0};
  Scalar weight_minus{0};

  Scalar mean() const { return t0 * weight_plus - t0 * weight_minus; }
};

template <typename Scalar>
TOutcomeDistribution<Scalar> t_distribution(const AngleConfig<Scalar>& c) {
  const Scalar t0 = t0_closed(c);
  if (!(t0 > Scalar(kVanishingT0)))
    throw NumericalError("t_distribution: t0 vanishes, outcome distribution undefined");
  const Scalar e = t_mean(c);
  if (std::abs(e) > t0 + Scalar(1e-12))
    throw NumericalError("t_distribution: |E| exceeds t0");
  TOutcomeDistribution<Scalar> d;
  d.t0 = t0;
  d.weight_plus = std::clamp((Scalar(1) + e / t0) / Scalar(2), Scalar(0), Scalar(1));
  d.weight_minus = std::clamp((Scalar(1) - e / t0) / Scalar(2), Scalar(0), Scalar(1));
  return d;
}

/// n single-shot outcomes; one uniform per shot, +t0 when u < weight_plus.
template <typename Scalar>
std::vector<Scalar> sample_t(const AngleConfig<Scalar>& c, std::int64_t n, RandomStream& rng) {
  const TOutcomeDistribution<Scalar> d = t_distribution(c);
  std::vector<Scalar> out;
  out.reserve(static_cast<std::size_t>(std::max<std::int64_t>(n, 0)));
  for (std::int64_t i = 0; i < n; ++i)
    out.push_back(rng.uniform() < static_cast<double>(d.weight_plus) ? d.t0 : -d.t0);
  return out;
}

}  // namespace chshlab
