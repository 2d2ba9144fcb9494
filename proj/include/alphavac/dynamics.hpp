#pragma once

// Open-system dynamics of the qutrit-qubit pair when only the qubit couples to
// the field.  The qubit dissipator is lifted with I3 (x) sigma_j; no Lamb-shift
// term.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "alphavac/bath_spectrum.hpp"
#include "alphavac/errors.hpp"
#include "alphavac/integrators.hpp"
#include "alphavac/quantum_core.hpp"

namespace alphavac {

template <typename Scalar>
using Operator6 = Eigen::Matrix<Complex<Scalar>, 6, 6>;

/// One-parameter initial family: f = 0 is maximally entangled, f = 1/3 separable.
template <typename Scalar>
class InitialFamily {
 public:
  explicit InitialFamily(Scalar f) : f_(f) {
    if (!(f_ >= 0) || !(f_ <= Scalar(1) / Scalar(3))) {
      throw DomainError("InitialFamily: f must lie in [0, 1/3], got " +
                        detail::format_real(f_));
    }
  }
  Scalar f() const noexcept { return f_; }

 private:
  Scalar f_;
};

template <typename Scalar>
InitialFamily(Scalar) -> InitialFamily<Scalar>;

enum class Integrator { rk4_fixed, rk45_adaptive };

template <typename Scalar>
struct EvolutionConfig {
  Scalar tau_max = 1;
  // RK4: total number of fixed steps over [0, tau_max].
  std::size_t steps = 1000;
  // Number of output intervals; 0 means one output per step.
  std::size_t samples = 0;
  Integrator integrator = Integrator::rk4_fixed;
  Scalar abs_tol = Scalar(1e-12);
  Scalar rel_tol = Scalar(1e-10);
  // Slack used when revalidating each recorded state.
  Scalar tolerance = Scalar(kDefaultTolerance);

  std::size_t output_intervals() const { return samples == 0 ? steps : samples; }

  void validate() const {
    if (!(tau_max > 0)) throw DomainError("EvolutionConfig: tau_max must be positive");
    if (steps < 1) throw DomainError("EvolutionConfig: steps must be >= 1");
    if (!(abs_tol > 0) || !(rel_tol > 0)) {
      throw DomainError("EvolutionConfig: tolerances must be positive");
    }
    if (!(tolerance >= 0)) throw DomainError("EvolutionConfig: tolerance must be non-negative");
  }
};

/// RK4 configuration whose step satisfies 4 A dtau <= max_rate_step, rounded
/// up so each output interval holds a whole number of steps.
template <typename Scalar>
EvolutionConfig<Scalar> rk4_config(const BathCoefficients<Scalar>& coeffs, Scalar tau_max,
                                   std::size_t samples, Scalar max_rate_step = Scalar(0.01)) {
  EvolutionConfig<Scalar> config;
  config.tau_max = tau_max;
  config.samples = std::max<std::size_t>(samples, 1);
  const auto needed =
      static_cast<std::size_t>(std::ceil(Scalar(4) * coeffs.A() * tau_max / max_rate_step));
  const std::size_t per_sample = std::max<std::size_t>(
      1, (std::max<std::size_t>(needed, 1) + config.samples - 1) / config.samples);
  config.steps = per_sample * config.samples;
  return config;
}

/// S_ij = A delta_ij - i B eps_ij3 - A delta_3i delta_3j.
template <typename Scalar>
struct KossakowskiMatrix {
  Eigen::Matrix<Complex<Scalar>, 3, 3> entries;

  /// Descending; {A+B, A-B, 0} up to ordering.
  RealVector<Scalar> eigenvalues() const { return hermitian_eigenvalues(entries); }
};

template <typename Scalar>
KossakowskiMatrix<Scalar> kossakowski_matrix(const BathCoefficients<Scalar>& coeffs) {
  const Complex<Scalar> i(0, 1);
  KossakowskiMatrix<Scalar> s;
  s.entries.setZero();
  s.entries(0, 0) = coeffs.A();
  s.entries(1, 1) = coeffs.A();
  s.entries(0, 1) = -i * coeffs.B();
  s.entries(1, 0) = i * coeffs.B();
  return s;
}

namespace detail {

// A matrix with exactly one non-zero entry per row, such as I3 (x) sigma_k.
template <typename Scalar>
struct MonomialOperator6 {
  std::array<int, 6> column{};
  std::array<Complex<Scalar>, 6> value{};

  static MonomialOperator6 from_dense(const Matrix<Scalar>& m) {
    MonomialOperator6 op;
    for (int r = 0; r < 6; ++r) {
      int nonzero = 0;
      for (int c = 0; c < 6; ++c) {
        if (m(r, c) != Complex<Scalar>(0)) {
          op.column[r] = c;
          op.value[r] = m(r, c);
          ++nonzero;
        }
      }
      if (nonzero != 1) throw DimensionError("MonomialOperator6: row without a single entry");
    }
    return op;
  }

  // this * rho
  Operator6<Scalar> left(const Operator6<Scalar>& rho) const {
    Operator6<Scalar> out;
    for (int r = 0; r < 6; ++r) out.row(r) = value[r] * rho.row(column[r]);
    return out;
  }

  // rho * this
  Operator6<Scalar> right(const Operator6<Scalar>& rho) const {
    Operator6<Scalar> out;
    for (int k = 0; k < 6; ++k) out.col(column[k]) = rho.col(k) * value[k];
    return out;
  }
};

}  // namespace detail

/// The lifted dissipator
///   L'[rho] = 1/2 sum_ij S_ij [2 s_j rho s_i - s_i s_j rho - rho s_i s_j],
/// with s_k = I3 (x) sigma_k.  The anticommutator part is reduced with
/// s_i s_j = delta_ij + i eps_ijk s_k to
///   -Tr(S) rho - 1/2 sum_k c_k {s_k, rho},  c_k = i sum_ij S_ij eps_ijk.
template <typename Scalar>
class LindbladGenerator {
 public:
  explicit LindbladGenerator(const BathCoefficients<Scalar>& coeffs)
      : kossakowski_(kossakowski_matrix(coeffs)) {
    const Matrix<Scalar> id3 = identity<Scalar>(BipartiteDims::u);
    for (int k = 0; k < 3; ++k) {
      lifted_[k] = detail::MonomialOperator6<Scalar>::from_dense(
          tensor_product(id3, pauli<Scalar>(k + 1)));
    }
    const Complex<Scalar> i(0, 1);
    trace_ = kossakowski_.entries.trace();
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        const Complex<Scalar> s = kossakowski_.entries(a, b);
        if (s == Complex<Scalar>(0)) continue;
        jumps_.push_back({a, b, s});
        if (a != b) anticommutator_[3 - a - b] += i * s * levi_civita(a, b, 3 - a - b);
      }
    }
  }

  Operator6<Scalar> operator()(const Operator6<Scalar>& rho) const {
    Operator6<Scalar> out = -trace_ * rho;
    for (int k = 0; k < 3; ++k) {
      if (anticommutator_[k] == Complex<Scalar>(0)) continue;
      out -= (anticommutator_[k] / Scalar(2)) * (lifted_[k].left(rho) + lifted_[k].right(rho));
    }
    for (const auto& t : jumps_) out += t.weight * lifted_[t.i].right(lifted_[t.j].left(rho));
    return out;
  }

  const KossakowskiMatrix<Scalar>& kossakowski() const noexcept { return kossakowski_; }

 private:
  struct Jump {
    int i;
    int j;
    Complex<Scalar> weight;
  };

  static Scalar levi_civita(int a, int b, int c) {
    return static_cast<Scalar>((a - b) * (b - c) * (c - a)) / 2;
  }

  KossakowskiMatrix<Scalar> kossakowski_;
  std::array<detail::MonomialOperator6<Scalar>, 3> lifted_;
  Complex<Scalar> trace_;
  std::array<Complex<Scalar>, 3> anticommutator_{};
  std::vector<Jump> jumps_;
};

template <typename Derived>
Matrix<RealOf<Derived>> lindblad_rhs(const Eigen::MatrixBase<Derived>& rho,
                                     const BathCoefficients<RealOf<Derived>>& coeffs) {
  detail::require_dim(rho, BipartiteDims::uv, "lindblad_rhs");
  const LindbladGenerator<RealOf<Derived>> generator(coeffs);
  return generator(Operator6<RealOf<Derived>>(rho));
}

template <typename Scalar>
Matrix<Scalar> lindblad_rhs(const DensityMatrix<Scalar>& rho,
                            const BathCoefficients<Scalar>& coeffs) {
  return lindblad_rhs(rho.matrix(), coeffs);
}

template <typename Scalar>
DensityMatrix<Scalar> initial_state(const InitialFamily<Scalar>& family) {
  const Scalar f = family.f();
  Matrix<Scalar> rho = Matrix<Scalar>::Zero(6, 6);
  rho(0, 0) = rho(0, 5) = rho(5, 0) = rho(5, 5) = f / 2;
  rho(2, 2) = rho(3, 3) = f / 2;
  rho(1, 1) = rho(1, 4) = rho(4, 1) = rho(4, 4) = (1 - 2 * f) / 2;
  return DensityMatrix<Scalar>(std::move(rho));
}

/// Q1..Q8 of the closed-form evolved state (index 0 holds Q1).  The growing
/// factor e^{4A tau} is multiplied through so large tau cannot overflow.
template <typename Scalar>
std::array<Scalar, 8> closed_form_entries(const InitialFamily<Scalar>& family,
                                          const BathCoefficients<Scalar>& coeffs, Scalar tau) {
  if (!(tau >= 0)) throw DomainError("closed-form evolution requires tau >= 0");
  const Scalar f = family.f();
  const Scalar a = coeffs.A();
  const Scalar b = coeffs.B();
  const Scalar decay = std::exp(-4 * a * tau);
  const Scalar coherence = std::exp(-2 * a * tau);
  return {
      (decay * (3 * f * a - a + b - b * f) - (a - b) * (f - 1)) / (4 * a),
      (decay * (-3 * f * a + a - b + b * f) - (a + b) * (f - 1)) / (4 * a),
      (a - b + b * decay) * f / (2 * a),
      (a - b * decay + b) * f / (2 * a),
      (decay * (-3 * f * a + a + b - b * f) - (a - b) * (f - 1)) / (4 * a),
      (decay * (3 * f * a - a - b + b * f) - (a + b) * (f - 1)) / (4 * a),
      coherence * f / 2,
      coherence * (1 - 2 * f) / 2,
  };
}

template <typename Scalar>
DensityMatrix<Scalar> evolve_closed_form(const InitialFamily<Scalar>& family,
                                         const BathCoefficients<Scalar>& coeffs, Scalar tau) {
  const auto q = closed_form_entries(family, coeffs, tau);
  Matrix<Scalar> rho = Matrix<Scalar>::Zero(6, 6);
  for (int k = 0; k < 6; ++k) rho(k, k) = q[k];
  rho(0, 5) = rho(5, 0) = q[6];
  rho(1, 4) = rho(4, 1) = q[7];
  return DensityMatrix<Scalar>(std::move(rho));
}

/// The tau -> infinity limit diag(K1, K2, K3, K4, K1, K2).
template <typename Scalar>
DensityMatrix<Scalar> equilibrium_state(const InitialFamily<Scalar>& family,
                                        const BathCoefficients<Scalar>& coeffs) {
  const Scalar f = family.f();
  const Scalar a = coeffs.A();
  const Scalar b = coeffs.B();
  const Scalar k1 = -(a - b) * (f - 1) / (4 * a);
  const Scalar k2 = -(a + b) * (f - 1) / (4 * a);
  const Scalar k3 = (a - b) * f / (2 * a);
  const Scalar k4 = (a + b) * f / (2 * a);
  Matrix<Scalar> rho = Matrix<Scalar>::Zero(6, 6);
  rho.diagonal() << k1, k2, k3, k4, k1, k2;
  return DensityMatrix<Scalar>(std::move(rho));
}

template <typename Scalar>
DensityMatrix<Scalar> equilibrium_reduced_V(const BathCoefficients<Scalar>& coeffs) {
  const Scalar a = coeffs.A();
  const Scalar b = coeffs.B();
  Matrix<Scalar> rho = Matrix<Scalar>::Zero(2, 2);
  rho(0, 0) = (a - b) / (2 * a);
  rho(1, 1) = (a + b) / (2 * a);
  return DensityMatrix<Scalar>(std::move(rho));
}

/// Gibbs state of H = (omega/2) sigma_3; |0> is the excited level.
template <typename Scalar>
DensityMatrix<Scalar> thermal_state_V(Scalar omega, Scalar temperature) {
  if (!(omega > 0) || !(temperature > 0)) {
    throw DomainError("thermal_state_V: omega and temperature must be positive");
  }
  const Scalar x = omega / temperature;  // e^{-x/2} / (2 cosh(x/2)) = 1 / (1 + e^{x})
  Matrix<Scalar> rho = Matrix<Scalar>::Zero(2, 2);
  rho(0, 0) = Scalar(1) / (1 + std::exp(x));
  rho(1, 1) = Scalar(1) / (1 + std::exp(-x));
  return DensityMatrix<Scalar>(std::move(rho));
}

/// Post-selected filter M = sqrt(1-p)|0><0| + |1><1| on the qubit, renormalised.
template <typename Scalar>
DensityMatrix<Scalar> weak_measurement_reversal(const DensityMatrix<Scalar>& rho, Scalar strength) {
  detail::require_dim(rho.matrix(), BipartiteDims::uv, "weak_measurement_reversal");
  if (!(strength >= 0) || !(strength < 1)) {
    throw DomainError("weak_measurement_reversal: strength must lie in [0, 1)");
  }
  RealVector<Scalar> filter(BipartiteDims::uv);
  for (Eigen::Index u = 0; u < BipartiteDims::u; ++u) {
    filter(BipartiteDims::index(u, 0)) = std::sqrt(1 - strength);
    filter(BipartiteDims::index(u, 1)) = 1;
  }
  Matrix<Scalar> out = filter.asDiagonal() * rho.matrix() * filter.asDiagonal();
  const Scalar norm = out.trace().real();
  if (!(norm > 0)) {
    throw ValidationError("weak_measurement_reversal: post-selection has zero probability");
  }
  out /= norm;
  return DensityMatrix<Scalar>(std::move(out), rho.tolerance());
}

template <typename Scalar>
struct Trajectory {
  std::vector<Scalar> tau;
  std::vector<DensityMatrix<Scalar>> states;
};

/// Numerically integrate the lifted master equation, recording a state at
/// each of config.output_intervals() + 1 uniformly spaced times.
template <typename Scalar>
Trajectory<Scalar> evolve_numeric(const DensityMatrix<Scalar>& rho0,
                                  const BathCoefficients<Scalar>& coeffs,
                                  const EvolutionConfig<Scalar>& config) {
  detail::require_dim(rho0.matrix(), BipartiteDims::uv, "evolve_numeric");
  config.validate();
  const LindbladGenerator<Scalar> generator(coeffs);
  const std::size_t intervals = config.output_intervals();
  const std::size_t steps_per_interval = std::max<std::size_t>(
      1, (config.steps + intervals - 1) / intervals);

  Trajectory<Scalar> out;
  out.tau.reserve(intervals + 1);
  out.states.reserve(intervals + 1);
  out.tau.push_back(0);
  out.states.push_back(rho0);

  DormandPrince45<Scalar> adaptive(config.abs_tol, config.rel_tol);
  Operator6<Scalar> state = rho0.matrix();
  Scalar previous = 0;
  for (std::size_t k = 1; k <= intervals; ++k) {
    const Scalar tau = config.tau_max * static_cast<Scalar>(k) / static_cast<Scalar>(intervals);
    if (config.integrator == Integrator::rk4_fixed) {
      state = rk4_integrate(state, tau - previous, steps_per_interval, generator);
    } else {
      state = adaptive.advance(state, previous, tau, generator);
    }
    previous = tau;
    try {
      out.states.emplace_back(Matrix<Scalar>(state), config.tolerance);
    } catch (const ValidationError& e) {
      throw IntegrationError("evolve_numeric: invalid state at tau=" +
                             detail::format_real(tau) + ": " + e.what());
    }
    out.tau.push_back(tau);
  }
  return out;
}

}  // namespace alphavac
