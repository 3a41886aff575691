#pragma once

// Small dense complex linear algebra for the 2x2 single-photon and 4x4
// two-photon operators. Matrices are Eigen types with a compile-time bound
// of 4 on each dimension, so dimension errors are caught at run time with
// a clear message instead of through Eigen assertions.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace chshlab {

inline constexpr int kMaxDim = 4;

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using SquareMatrix =
    Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

template <typename Scalar>
using ComplexVector = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, 1, 0, kMaxDim, 1>;

template <typename Scalar>
using Matrix2 = Eigen::Matrix<Complex<Scalar>, 2, 2>;
template <typename Scalar>
using Matrix4 = Eigen::Matrix<Complex<Scalar>, 4, 4>;
template <typename Scalar>
using Vector2 = Eigen::Matrix<Complex<Scalar>, 2, 1>;
template <typename Scalar>
using Vector4 = Eigen::Matrix<Complex<Scalar>, 4, 1>;

/// Raised when an iterative or conditioning step cannot produce a result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (m.rows() != m.cols())
    throw std::invalid_argument(std::string(what) + ": matrix is not square");
}

}  // namespace detail

template <typename DerivedA, typename DerivedB>
auto mat_mul(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::RealScalar;
  detail::require_square(a, "mat_mul");
  detail::require_square(b, "mat_mul");
  if (a.rows() != b.rows())
    throw std::invalid_argument("mat_mul: dimension mismatch (" + std::to_string(a.rows()) +
                                " vs " + std::to_string(b.rows()) + ")");
  SquareMatrix<Scalar> out = a * b;
  return out;
}

template <typename Derived>
auto adjoint(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::RealScalar;
  SquareMatrix<Scalar> out = a.adjoint();
  return out;
}

/// Kronecker product of two single-photon operators. The first factor
/// (Alice) varies slowest, so the basis order is |xx>, |xy>, |yx>, |yy>.
template <typename DerivedA, typename DerivedB>
Matrix4<typename DerivedA::RealScalar> tensor_product(const Eigen::MatrixBase<DerivedA>& a,
                                                      const Eigen::MatrixBase<DerivedB>& b) {
  if (a.rows() != 2 || a.cols() != 2 || b.rows() != 2 || b.cols() != 2)
    throw std::invalid_argument("tensor_product: both factors must be 2x2");
  Matrix4<typename DerivedA::RealScalar> out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.template block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, typename Derived::RealScalar tol) {
  if (m.rows() != m.cols()) return false;
  if (m.size() == 0) return true;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

template <typename Scalar>
struct SpectralDecomposition {
  /// Ascending.
  std::vector<Scalar> eigenvalues;
  /// Column i pairs with eigenvalues[i].
  SquareMatrix<Scalar> eigenvectors;
  int sweeps = 0;

  int dim() const { return static_cast<int>(eigenvalues.size()); }
  auto eigenvector(int i) const { return eigenvectors.col(i); }

  SquareMatrix<Scalar> reconstruct() const {
    SquareMatrix<Scalar> out = SquareMatrix<Scalar>::Zero(dim(), dim());
    for (int i = 0; i < dim(); ++i)
      out += eigenvalues[i] * eigenvectors.col(i) * eigenvectors.col(i).adjoint();
    return out;
  }
};

inline constexpr int kJacobiMaxSweeps = 100;
inline constexpr double kDegenerateGap = 1e-8;

/// Cyclic complex Jacobi diagonalization of a Hermitian matrix.
///
/// Each (p, q) rotation first removes the phase of the off-diagonal entry with
/// a diagonal unitary, then applies the real symmetric Jacobi rotation to the
/// resulting 2x2 block. Sweeps continue until the Frobenius norm of the
/// off-diagonal part is at most `tol`. Eigenvectors inside a cluster of
/// nearly equal eigenvalues are re-orthonormalized with Gram-Schmidt.
template <typename Derived>
SpectralDecomposition<typename Derived::RealScalar> hermitian_eigen(
    const Eigen::MatrixBase<Derived>& m, typename Derived::RealScalar tol) {
  using Scalar = typename Derived::RealScalar;
  using C = Complex<Scalar>;
  detail::require_square(m, "hermitian_eigen");
  if (m.rows() < 1 || m.rows() > kMaxDim)
    throw std::invalid_argument("hermitian_eigen: dimension must be in 1..4");
  if (!is_hermitian(m, tol)) throw std::invalid_argument("hermitian_eigen: matrix is not Hermitian");

  const int n = static_cast<int>(m.rows());
  SquareMatrix<Scalar> a = (m + m.adjoint()) / Scalar(2);
  SquareMatrix<Scalar> v = SquareMatrix<Scalar>::Identity(n, n);

  auto off_norm = [&] {
    Scalar s = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };

  int sweep = 0;
  while (off_norm() > tol) {
    if (sweep == kJacobiMaxSweeps)
      throw NumericalError("hermitian_eigen: no convergence after " +
                           std::to_string(kJacobiMaxSweeps) + " sweeps");
    ++sweep;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const Scalar r = std::abs(a(p, q));
        if (r == Scalar(0)) continue;
        const C phase = a(p, q) / r;

        const Scalar app = std::real(a(p, p));
        const Scalar aqq = std::real(a(q, q));
        const Scalar theta = (aqq - app) / (Scalar(2) * r);
        const Scalar t = (theta >= 0 ? Scalar(1) : Scalar(-1)) /
                         (std::abs(theta) + std::sqrt(theta * theta + Scalar(1)));
        const Scalar c = Scalar(1) / std::sqrt(t * t + Scalar(1));
        const Scalar s = t * c;

        // U = D R with D = diag(1, conj(phase)) on (p, q).
        SquareMatrix<Scalar> u = SquareMatrix<Scalar>::Identity(n, n);
        u(p, p) = c;
        u(p, q) = s;
        u(q, p) = -s * std::conj(phase);
        u(q, q) = c * std::conj(phase);

        a = u.adjoint() * a * u;
        a(p, q) = a(q, p) = C(0);
        for (int i = 0; i < n; ++i) a(i, i) = C(std::real(a(i, i)));
        v = v * u;
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return std::real(a(i, i)) < std::real(a(j, j)); });

  SpectralDecomposition<Scalar> out;
  out.sweeps = sweep;
  out.eigenvectors.resize(n, n);
  for (int k = 0; k < n; ++k) {
    out.eigenvalues.push_back(std::real(a(order[k], order[k])));
    out.eigenvectors.col(k) = v.col(order[k]);
  }

  // Modified Gram-Schmidt inside each degenerate cluster.
  for (int begin = 0; begin < n;) {
    int end = begin + 1;
    while (end < n && out.eigenvalues[end] - out.eigenvalues[end - 1] < Scalar(kDegenerateGap)) ++end;
    for (int k = begin; k < end; ++k) {
      for (int j = begin; j < k; ++j) {
        const C overlap = out.eigenvectors.col(j).dot(out.eigenvectors.col(k));
        out.eigenvectors.col(k) -= overlap * out.eigenvectors.col(j);
      }
      out.eigenvectors.col(k).normalize();
    }
    begin = end;
  }
  return out;
}

}  // namespace chshlab
