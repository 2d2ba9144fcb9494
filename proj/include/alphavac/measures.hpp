#pragma once

// Information measures on qutrit-qubit states: memory-assisted entropic
// uncertainty L and its bound R, negativity, and mixedness.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "alphavac/bath_spectrum.hpp"
#include "alphavac/dynamics.hpp"
#include "alphavac/errors.hpp"
#include "alphavac/quantum_core.hpp"

namespace alphavac {

// Slack for the L >= R check on computed reports.
inline constexpr double kUncertaintySlack = 1e-9;
inline constexpr double kNegativityClamp = 1e-12;

/// A Hermitian qutrit operator together with an orthonormal eigenbasis
/// (eigenvectors are the columns of eigenvectors()).
template <typename Scalar>
class Observable {
 public:
  using Matrix3 = Eigen::Matrix<Complex<Scalar>, 3, 3>;
  using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

  Observable(std::string name, Matrix3 matrix, Vector3 eigenvalues, Matrix3 eigenvectors)
      : name_(std::move(name)),
        matrix_(std::move(matrix)),
        eigenvalues_(std::move(eigenvalues)),
        eigenvectors_(std::move(eigenvectors)) {
    const Scalar tol = Scalar(1e-12);
    if ((eigenvectors_.adjoint() * eigenvectors_ - Matrix3::Identity()).cwiseAbs().maxCoeff() >
        tol) {
      throw ValidationError("Observable " + name_ + ": eigenvectors are not orthonormal");
    }
    const Matrix3 rebuilt = eigenvectors_ *
                            eigenvalues_.template cast<Complex<Scalar>>().asDiagonal() *
                            eigenvectors_.adjoint();
    if ((rebuilt - matrix_).cwiseAbs().maxCoeff() > tol) {
      throw ValidationError("Observable " + name_ +
                            ": spectral decomposition does not reproduce the matrix");
    }
  }

  /// Eigenbasis from a Hermitian eigensolver.
  static Observable from_matrix(std::string name, const Matrix3& matrix) {
    if (hermiticity_defect(matrix) > Scalar(1e-12)) {
      throw ValidationError("Observable " + name + ": matrix is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Matrix3> solver(matrix);
    return Observable(std::move(name), matrix, solver.eigenvalues(), solver.eigenvectors());
  }

  const std::string& name() const noexcept { return name_; }
  const Matrix3& matrix() const noexcept { return matrix_; }
  const Vector3& eigenvalues() const noexcept { return eigenvalues_; }
  const Matrix3& eigenvectors() const noexcept { return eigenvectors_; }

  Matrix3 projector(Eigen::Index k) const {
    return eigenvectors_.col(k) * eigenvectors_.col(k).adjoint();
  }

 private:
  std::string name_;
  Matrix3 matrix_;
  Vector3 eigenvalues_;
  Matrix3 eigenvectors_;
};

template <typename Scalar = double>
Observable<Scalar> qutrit_sigma_z() {
  using Obs = Observable<Scalar>;
  typename Obs::Matrix3 m = Obs::Matrix3::Zero();
  m(0, 0) = 1;
  m(2, 2) = -1;
  return Obs("sigma_z", m, typename Obs::Vector3(1, 0, -1), Obs::Matrix3::Identity());
}

template <typename Scalar = double>
Observable<Scalar> qutrit_sigma_x() {
  using Obs = Observable<Scalar>;
  const Scalar r = Scalar(1) / std::sqrt(Scalar(2));
  const Scalar h = Scalar(1) / 2;
  typename Obs::Matrix3 m = Obs::Matrix3::Zero();
  m(0, 1) = m(1, 0) = m(1, 2) = m(2, 1) = r;
  typename Obs::Matrix3 vectors;
  vectors << h, r, h,
             r, 0, -r,
             h, -r, h;
  return Obs("sigma_x", m, typename Obs::Vector3(1, 0, -1), vectors);
}

/// c = max_ij |<phi_i|psi_j>|^2.
template <typename Scalar>
Scalar overlap_c(const Observable<Scalar>& o1, const Observable<Scalar>& o2) {
  return (o1.eigenvectors().adjoint() * o2.eigenvectors()).cwiseAbs2().maxCoeff();
}

/// Dephase the qutrit in the eigenbasis of obs: sum_k (P_k (x) I) rho (P_k (x) I).
template <typename Scalar>
DensityMatrix<Scalar> post_measurement_state(const DensityMatrix<Scalar>& rho,
                                             const Observable<Scalar>& obs) {
  detail::require_dim(rho.matrix(), BipartiteDims::uv, "post_measurement_state");
  const Matrix<Scalar> id2 = identity<Scalar>(BipartiteDims::v);
  Matrix<Scalar> out = Matrix<Scalar>::Zero(BipartiteDims::uv, BipartiteDims::uv);
  for (Eigen::Index k = 0; k < 3; ++k) {
    const Matrix<Scalar> p = tensor_product(obs.projector(k), id2);
    out.noalias() += p * rho.matrix() * p;
  }
  return DensityMatrix<Scalar>(std::move(out), rho.tolerance());
}

/// S(U|V) = S(rho_UV) - S(rho_V), in bits.
template <typename Scalar>
Scalar conditional_entropy(const DensityMatrix<Scalar>& rho) {
  return von_neumann_entropy(rho) - von_neumann_entropy(partial_trace_over_U(rho));
}

/// L = S(sigma_z|V) + S(sigma_x|V).
template <typename Scalar>
Scalar entropic_uncertainty_L(const DensityMatrix<Scalar>& rho) {
  return conditional_entropy(post_measurement_state(rho, qutrit_sigma_z<Scalar>())) +
         conditional_entropy(post_measurement_state(rho, qutrit_sigma_x<Scalar>()));
}

/// R = S(U|V) + log2(1/c) with c computed from the two eigenbases.
template <typename Scalar>
Scalar entropic_bound_R(const DensityMatrix<Scalar>& rho) {
  const Scalar c = overlap_c(qutrit_sigma_z<Scalar>(), qutrit_sigma_x<Scalar>());
  return conditional_entropy(rho) - std::log2(c);
}

template <typename Scalar>
Scalar negativity(const DensityMatrix<Scalar>& rho) {
  const Scalar n = trace_norm(partial_transpose_U(rho), rho.tolerance()) - 1;
  if (n < -Scalar(kNegativityClamp)) {
    throw ValidationError("negativity: trace norm below one (" + detail::format_real(n) + ")");
  }
  return n < 0 ? Scalar(0) : n;
}

/// X = d/(d-1) (1 - Tr rho^2).
template <typename Scalar>
Scalar mixedness(const DensityMatrix<Scalar>& rho) {
  const Scalar d = static_cast<Scalar>(rho.dim());
  if (rho.dim() < 2) return 0;
  const Scalar x = d / (d - 1) * (1 - purity(rho));
  return x < 0 ? Scalar(0) : x;  // purity can exceed 1 by round-off
}

/// Closed-form mixedness of the evolved f-family state (d = 6), with
/// e^{8 A tau} multiplied through.
template <typename Scalar>
Scalar mixedness_closed_form(const InitialFamily<Scalar>& family,
                             const BathCoefficients<Scalar>& coeffs, Scalar tau) {
  if (!(tau >= 0)) throw DomainError("mixedness_closed_form requires tau >= 0");
  const Scalar f = family.f();
  const Scalar a2 = coeffs.A() * coeffs.A();
  const Scalar b2 = coeffs.B() * coeffs.B();
  const Scalar e = std::exp(-4 * coeffs.A() * tau);
  const Scalar bracket = a2 * ((f * (3 * f - 2) - 3) + 2 * (f * (5 * f - 4) + 1) * e +
                               (1 - 3 * f) * (1 - 3 * f) * e * e) +
                         b2 * (f * (3 * f - 2) + 1) * (1 - e) * (1 - e);
  return -3 * bracket / (10 * a2);
}

/// F1..F9 of the sigma_x post-measurement closed form (index 0 holds F1).
template <typename Scalar>
std::array<Scalar, 9> sigma_x_closed_form_entries(const InitialFamily<Scalar>& family,
                                                  const BathCoefficients<Scalar>& coeffs,
                                                  Scalar tau) {
  if (!(tau >= 0)) throw DomainError("closed-form evolution requires tau >= 0");
  const Scalar f = family.f();
  const Scalar a = coeffs.A();
  const Scalar b = coeffs.B();
  const Scalar e = std::exp(-4 * a * tau);
  const Scalar g = std::exp(-2 * a * tau);
  return {
      ((b - a) - b * e) * (f - 3) / (4 * a),
      g * (f - 1) / 4,
      ((a - b) + b * e) * (3 * f - 1) / (4 * a),
      -3 * g * (f - 1) / 4,
      (b * e - (a + b)) * (f - 3) / (4 * a),
      ((a + b) - b * e) * (3 * f - 1) / (4 * a),
      ((a - b) + b * e) * (f + 1) / (2 * a),
      -g * (f - 1) / 2,
      ((a + b) - b * e) * (f + 1) / (2 * a),
  };
}

template <typename Scalar>
DensityMatrix<Scalar> sigma_x_post_measurement_closed_form(const InitialFamily<Scalar>& family,
                                                           const BathCoefficients<Scalar>& coeffs,
                                                           Scalar tau) {
  const auto fe = sigma_x_closed_form_entries(family, coeffs, tau);
  const auto F = [&](int k) { return fe[k - 1]; };
  Eigen::Matrix<Scalar, 6, 6> m;
  m << F(1), F(2), 0, 0, F(3), F(4),
       F(2), F(5), 0, 0, F(4), F(6),
       0, 0, F(7), F(8), 0, 0,
       0, 0, F(8), F(9), 0, 0,
       F(3), F(4), 0, 0, F(1), F(2),
       F(4), F(6), 0, 0, F(2), F(5);
  return DensityMatrix<Scalar>(Matrix<Scalar>(m.template cast<Complex<Scalar>>() / Scalar(4)));
}

template <typename Scalar>
struct UncertaintyReport {
  Scalar tau;
  Scalar L;
  Scalar R;
  Scalar c;
  Scalar negativity;
  Scalar mixedness;
  Scalar purity;
};

/// All measures of one state.  Throws ValidationError if L < R - slack or the
/// negativity/mixedness leave their ranges.
template <typename Scalar>
UncertaintyReport<Scalar> uncertainty_report(const DensityMatrix<Scalar>& rho, Scalar tau) {
  const auto sz = qutrit_sigma_z<Scalar>();
  const auto sx = qutrit_sigma_x<Scalar>();
  UncertaintyReport<Scalar> r;
  r.tau = tau;
  r.c = overlap_c(sz, sx);
  r.L = conditional_entropy(post_measurement_state(rho, sz)) +
        conditional_entropy(post_measurement_state(rho, sx));
  r.R = conditional_entropy(rho) - std::log2(r.c);
  r.negativity = negativity(rho);
  r.purity = purity(rho);
  r.mixedness = mixedness(rho);
  if (r.L < r.R - Scalar(kUncertaintySlack)) {
    throw ValidationError("uncertainty relation violated at tau=" + detail::format_real(tau) +
                          ": L=" + detail::format_real(r.L) + " R=" + detail::format_real(r.R));
  }
  const Scalar slack = rho.tolerance();
  if (r.mixedness < -slack || r.mixedness > 1 + slack) {
    throw ValidationError("mixedness outside [0, 1] at tau=" + detail::format_real(tau));
  }
  return r;
}

}  // namespace alphavac
