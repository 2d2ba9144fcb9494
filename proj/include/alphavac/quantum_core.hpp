#pragma once

// Dense complex linear algebra for small bipartite qutrit-qubit states.
//
// Everything is templated on the real scalar type so the same code runs in
// double for production and in long double for cross-checks.  Composite
// indices follow index = 2*u + v with u the qutrit and v the qubit label.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <string>

#include "alphavac/errors.hpp"

namespace alphavac {

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using ComplexMatrix = Matrix<double>;

/// Real scalar type underlying an Eigen expression.
template <typename Derived>
using RealOf = typename Eigen::NumTraits<typename Derived::Scalar>::Real;

struct BipartiteDims {
  static constexpr Eigen::Index u = 3;
  static constexpr Eigen::Index v = 2;
  static constexpr Eigen::Index uv = u * v;

  static constexpr Eigen::Index index(Eigen::Index qutrit, Eigen::Index qubit) {
    return v * qutrit + qubit;
  }
};

inline constexpr double kDefaultTolerance = 1e-9;

// Eigenvalues in (-kEigenClampWindow, 0) count as zero inside entropies.
inline constexpr double kEigenClampWindow = 1e-10;

namespace detail {

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionError(std::string(what) + ": expected a non-empty square matrix, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

template <typename Derived>
void require_dim(const Eigen::MatrixBase<Derived>& m, Eigen::Index dim, const char* what) {
  if (m.rows() != dim || m.cols() != dim) {
    throw DimensionError(std::string(what) + ": expected " + std::to_string(dim) + "x" +
                         std::to_string(dim) + ", got " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
  }
}

}  // namespace detail

template <typename Derived>
RealOf<Derived> hermiticity_defect(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return RealOf<Derived>(0);
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// Real spectrum of a Hermitian matrix, in descending order.
template <typename Derived>
RealVector<RealOf<Derived>> hermitian_eigenvalues(
    const Eigen::MatrixBase<Derived>& m,
    RealOf<Derived> tolerance = RealOf<Derived>(kDefaultTolerance)) {
  using Real = RealOf<Derived>;
  detail::require_square(m, "hermitian_eigenvalues");
  const Real defect = hermiticity_defect(m);
  if (!(defect <= tolerance)) {
    throw ValidationError("hermitian_eigenvalues: matrix is not Hermitian (defect " +
                          detail::format_real(defect) + ")");
  }
  Matrix<Real> hermitian = (m + m.adjoint()) / Real(2);
  Eigen::SelfAdjointEigenSolver<Matrix<Real>> solver(hermitian, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().reverse();
}

/// Kronecker product a (x) b; row (i, k) of the result is i * dim(b) + k.
template <typename DerivedA, typename DerivedB>
Matrix<RealOf<DerivedA>> tensor_product(const Eigen::MatrixBase<DerivedA>& a,
                                        const Eigen::MatrixBase<DerivedB>& b) {
  Matrix<RealOf<DerivedA>> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

template <typename Scalar>
Matrix<Scalar> identity(Eigen::Index dim) {
  return Matrix<Scalar>::Identity(dim, dim);
}

/// Pauli matrix sigma_k for k in {1, 2, 3}; k = 0 gives the 2x2 identity.
template <typename Scalar>
Matrix<Scalar> pauli(int k) {
  const Complex<Scalar> i(0, 1);
  Matrix<Scalar> s = Matrix<Scalar>::Zero(2, 2);
  switch (k) {
    case 0: s(0, 0) = s(1, 1) = 1; break;
    case 1: s(0, 1) = s(1, 0) = 1; break;
    case 2: s(0, 1) = -i; s(1, 0) = i; break;
    case 3: s(0, 0) = 1; s(1, 1) = -1; break;
    default: throw DomainError("pauli: index must be 0..3, got " + std::to_string(k));
  }
  return s;
}

/// |row><col| in dimension dim.
template <typename Scalar>
Matrix<Scalar> outer_unit(Eigen::Index dim, Eigen::Index row, Eigen::Index col) {
  Matrix<Scalar> m = Matrix<Scalar>::Zero(dim, dim);
  m(row, col) = 1;
  return m;
}

/// A matrix certified Hermitian, unit-trace and positive semidefinite within
/// a tolerance.  The spectrum computed during validation is kept.
template <typename Scalar>
class DensityMatrix {
 public:
  using MatrixType = Matrix<Scalar>;

  explicit DensityMatrix(MatrixType m, Scalar tolerance = Scalar(kDefaultTolerance))
      : matrix_(std::move(m)), tolerance_(tolerance) {
    detail::require_square(matrix_, "DensityMatrix");
    if (!(tolerance_ >= 0)) throw DomainError("DensityMatrix: tolerance must be non-negative");
    const Scalar defect = hermiticity_defect(matrix_);
    if (!(defect <= tolerance_)) {
      throw ValidationError("DensityMatrix: not Hermitian (defect " +
                            detail::format_real(defect) + ")");
    }
    const Complex<Scalar> trace = matrix_.trace();
    if (!(std::abs(trace - Complex<Scalar>(1)) <= tolerance_)) {
      throw ValidationError("DensityMatrix: trace " + detail::format_real(trace.real()) +
                            " differs from 1");
    }
    eigenvalues_ = hermitian_eigenvalues(matrix_, tolerance_);
    const Scalar smallest = eigenvalues_(eigenvalues_.size() - 1);
    if (!(smallest >= -tolerance_)) {
      throw ValidationError("DensityMatrix: not positive semidefinite (min eigenvalue " +
                            detail::format_real(smallest) + ")");
    }
  }

  const MatrixType& matrix() const noexcept { return matrix_; }
  Eigen::Index dim() const noexcept { return matrix_.rows(); }
  Scalar tolerance() const noexcept { return tolerance_; }
  /// Descending spectrum.
  const RealVector<Scalar>& eigenvalues() const noexcept { return eigenvalues_; }
  Complex<Scalar> operator()(Eigen::Index r, Eigen::Index c) const { return matrix_(r, c); }

 private:
  MatrixType matrix_;
  Scalar tolerance_;
  RealVector<Scalar> eigenvalues_;
};

template <typename Derived>
DensityMatrix(const Eigen::MatrixBase<Derived>&) -> DensityMatrix<RealOf<Derived>>;

/// (rho_V)_{v v'} = sum_u rho_{(u,v),(u,v')}.
template <typename Derived>
Matrix<RealOf<Derived>> partial_trace_over_U(const Eigen::MatrixBase<Derived>& rho) {
  detail::require_dim(rho, BipartiteDims::uv, "partial_trace_over_U");
  Matrix<RealOf<Derived>> out = Matrix<RealOf<Derived>>::Zero(BipartiteDims::v, BipartiteDims::v);
  for (Eigen::Index u = 0; u < BipartiteDims::u; ++u) {
    out += rho.block(BipartiteDims::index(u, 0), BipartiteDims::index(u, 0), BipartiteDims::v,
                     BipartiteDims::v);
  }
  return out;
}

template <typename Scalar>
DensityMatrix<Scalar> partial_trace_over_U(const DensityMatrix<Scalar>& rho) {
  return DensityMatrix<Scalar>(partial_trace_over_U(rho.matrix()), rho.tolerance());
}

template <typename Derived>
Matrix<RealOf<Derived>> partial_trace_over_V(const Eigen::MatrixBase<Derived>& rho) {
  detail::require_dim(rho, BipartiteDims::uv, "partial_trace_over_V");
  Matrix<RealOf<Derived>> out(BipartiteDims::u, BipartiteDims::u);
  for (Eigen::Index u = 0; u < BipartiteDims::u; ++u) {
    for (Eigen::Index w = 0; w < BipartiteDims::u; ++w) {
      out(u, w) = rho(BipartiteDims::index(u, 0), BipartiteDims::index(w, 0)) +
                  rho(BipartiteDims::index(u, 1), BipartiteDims::index(w, 1));
    }
  }
  return out;
}

template <typename Scalar>
DensityMatrix<Scalar> partial_trace_over_V(const DensityMatrix<Scalar>& rho) {
  return DensityMatrix<Scalar>(partial_trace_over_V(rho.matrix()), rho.tolerance());
}

/// Transpose on the qutrit factor: entry ((u,v),(u',v')) moves to ((u',v),(u,v')).
template <typename Derived>
Matrix<RealOf<Derived>> partial_transpose_U(const Eigen::MatrixBase<Derived>& rho) {
  detail::require_dim(rho, BipartiteDims::uv, "partial_transpose_U");
  Matrix<RealOf<Derived>> out(BipartiteDims::uv, BipartiteDims::uv);
  for (Eigen::Index u = 0; u < BipartiteDims::u; ++u) {
    for (Eigen::Index w = 0; w < BipartiteDims::u; ++w) {
      out.block(BipartiteDims::index(u, 0), BipartiteDims::index(w, 0), BipartiteDims::v,
                BipartiteDims::v) = rho.block(BipartiteDims::index(w, 0),
                                              BipartiteDims::index(u, 0), BipartiteDims::v,
                                              BipartiteDims::v);
    }
  }
  return out;
}

template <typename Scalar>
Matrix<Scalar> partial_transpose_U(const DensityMatrix<Scalar>& rho) {
  return partial_transpose_U(rho.matrix());
}

/// Shannon entropy in bits of a spectrum, applying the clamp window.
template <typename Scalar>
Scalar spectral_entropy_bits(const RealVector<Scalar>& eigenvalues) {
  Scalar entropy = 0;
  for (Eigen::Index k = 0; k < eigenvalues.size(); ++k) {
    const Scalar p = eigenvalues(k);
    if (p < -Scalar(kEigenClampWindow)) {
      throw ValidationError("von_neumann_entropy: eigenvalue " + detail::format_real(p) +
                            " is below the clamp window");
    }
    if (p > 0) entropy -= p * std::log2(p);
  }
  return std::max(entropy, Scalar(0));
}

template <typename Scalar>
Scalar von_neumann_entropy(const DensityMatrix<Scalar>& rho) {
  return spectral_entropy_bits(rho.eigenvalues());
}

/// Sum of |eigenvalue| for a Hermitian matrix.
template <typename Derived>
RealOf<Derived> trace_norm(const Eigen::MatrixBase<Derived>& m,
                           RealOf<Derived> tolerance = RealOf<Derived>(kDefaultTolerance)) {
  return hermitian_eigenvalues(m, tolerance).cwiseAbs().sum();
}

template <typename Scalar>
Scalar purity(const DensityMatrix<Scalar>& rho) {
  return rho.matrix().cwiseAbs2().sum();
}

}  // namespace alphavac
