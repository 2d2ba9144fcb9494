#pragma once

// Response spectrum of a conformally coupled massless scalar field in de Sitter
// alpha-vacua, and the Lindblad coefficients A, B derived from it.
//
// All exponentials are combined in the log domain so that large pi*omega or
// omega/T do not overflow intermediate terms.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>

#include "alphavac/errors.hpp"

namespace alphavac {

/// The alpha -> -infinity member of the family; detector response is thermal.
struct BunchDavies {
  friend bool operator==(BunchDavies, BunchDavies) = default;
};

template <typename Scalar>
struct AlphaVacuum {
  Scalar alpha;
  friend bool operator==(const AlphaVacuum&, const AlphaVacuum&) = default;
};

template <typename Scalar>
using Vacuum = std::variant<BunchDavies, AlphaVacuum<Scalar>>;

// alpha must stay at or below this; the spectrum diverges as alpha -> 0-.
inline constexpr double kAlphaCeiling = -1e-6;

template <typename Scalar>
class BathParams {
 public:
  BathParams(Scalar omega, Scalar temperature, std::type_identity_t<Vacuum<Scalar>> vacuum)
      : omega_(omega), temperature_(temperature), vacuum_(vacuum) {
    if (!(omega_ > 0) || !std::isfinite(omega_)) {
      throw DomainError("BathParams: omega must be positive and finite");
    }
    if (!(temperature_ > 0) || !std::isfinite(temperature_)) {
      throw DomainError("BathParams: temperature must be positive and finite");
    }
    if (const auto* a = std::get_if<AlphaVacuum<Scalar>>(&vacuum_)) {
      if (!(a->alpha <= Scalar(kAlphaCeiling))) {
        throw DomainError("BathParams: alpha must be <= -1e-6");
      }
    }
  }

  Scalar omega() const noexcept { return omega_; }
  Scalar temperature() const noexcept { return temperature_; }
  const Vacuum<Scalar>& vacuum() const noexcept { return vacuum_; }
  bool is_bunch_davies() const noexcept { return std::holds_alternative<BunchDavies>(vacuum_); }
  std::optional<Scalar> alpha() const {
    if (const auto* a = std::get_if<AlphaVacuum<Scalar>>(&vacuum_)) return a->alpha;
    return std::nullopt;
  }

 private:
  Scalar omega_;
  Scalar temperature_;
  Vacuum<Scalar> vacuum_;
};

/// Coefficients of the Kossakowski matrix.  A > 0 and |B| <= A.
template <typename Scalar>
class BathCoefficients {
 public:
  BathCoefficients(Scalar a, Scalar b) : a_(a), b_(b) {
    if (!(a_ > 0) || !std::isfinite(a_)) {
      throw DomainError("BathCoefficients: A must be positive and finite");
    }
    if (!(std::abs(b_) <= a_)) throw DomainError("BathCoefficients: |B| must not exceed A");
  }

  Scalar A() const noexcept { return a_; }
  Scalar B() const noexcept { return b_; }

 private:
  Scalar a_;
  Scalar b_;
};

template <typename Scalar>
BathCoefficients(Scalar, Scalar) -> BathCoefficients<Scalar>;

template <typename Scalar>
Scalar gibbons_hawking_temperature(Scalar curvature_radius) {
  if (!(curvature_radius > 0)) {
    throw DomainError("gibbons_hawking_temperature: curvature radius must be positive");
  }
  return Scalar(1) / (Scalar(2) * std::numbers::pi_v<Scalar> * curvature_radius);
}

namespace detail {

// log(1 + e^x) without overflow.
template <typename Scalar>
Scalar softplus(Scalar x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

// log(1 - e^{2 alpha}) for alpha < 0.
template <typename Scalar>
Scalar log_one_minus_exp2alpha(Scalar alpha) {
  return std::log(-std::expm1(Scalar(2) * alpha));
}

}  // namespace detail

/// Natural log of the field spectrum G(lambda).  G is positive for every
/// lambda != 0, so the log is always defined.
template <typename Scalar>
Scalar log_power_spectrum(Scalar lambda, const BathParams<Scalar>& params) {
  if (lambda == 0 || !std::isfinite(lambda)) {
    throw DomainError("power_spectrum: lambda must be finite and non-zero");
  }
  const Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar y = std::abs(lambda) / params.temperature();
  // |lambda| / |1 - e^{-lambda/T}|; for lambda < 0 the denominator is e^{y} - 1.
  Scalar log_g = std::log(std::abs(lambda)) - std::log(-std::expm1(-y)) - std::log(Scalar(2) * pi);
  if (lambda < 0) log_g -= y;
  if (const auto alpha = params.alpha()) {
    log_g += Scalar(2) * detail::softplus(*alpha - pi * lambda);
    log_g -= detail::log_one_minus_exp2alpha(*alpha);
  }
  return log_g;
}

template <typename Scalar>
Scalar power_spectrum(Scalar lambda, const BathParams<Scalar>& params) {
  return std::exp(log_power_spectrum(lambda, params));
}

/// A and B from the closed-form expressions
///   A, B = omega [(e^{a - pi w} + 1)^2 +/- (e^{a + pi w} + 1)^2 e^{-w/T}]
///          / (8 pi (e^{2a} - 1)(e^{-w/T} - 1)),
/// whose two negative denominator factors are folded into positive ones.
template <typename Scalar>
BathCoefficients<Scalar> bath_coefficients(const BathParams<Scalar>& params) {
  const Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar w = params.omega();
  const Scalar ratio = w / params.temperature();

  Scalar log_down = 0;   // log (e^{a - pi w} + 1)^2
  Scalar log_up = -ratio;  // log (e^{a + pi w} + 1)^2 e^{-w/T}
  Scalar log_denominator = std::log(Scalar(8) * pi) + std::log(-std::expm1(-ratio));
  if (const auto alpha = params.alpha()) {
    log_down = Scalar(2) * detail::softplus(*alpha - pi * w);
    log_up += Scalar(2) * detail::softplus(*alpha + pi * w);
    log_denominator += detail::log_one_minus_exp2alpha(*alpha);
  }
  const Scalar down = std::exp(log_down - log_denominator);
  const Scalar up = std::exp(log_up - log_denominator);
  const Scalar a = w * (down + up);
  const Scalar b = w * (down - up);
  if (!(a > 0) || !std::isfinite(a)) {
    throw DomainError("bath_coefficients: A is not a positive finite number at omega=" +
                      detail::format_real(w) + ", T=" +
                      detail::format_real(params.temperature()));
  }
  return BathCoefficients<Scalar>(a, b);
}

}  // namespace alphavac
