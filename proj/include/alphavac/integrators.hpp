#pragma once

// Explicit Runge-Kutta steppers for autonomous linear-algebra ODEs dy/dt = f(y),
// where y is any fixed- or dynamic-size Eigen object with complex or real entries.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "alphavac/errors.hpp"

namespace alphavac {

/// Classic fourth-order step.
template <typename State, typename Rhs, typename Real>
State rk4_step(const State& y, Real h, Rhs&& rhs) {
  const State k1 = rhs(y);
  const State k2 = rhs((y + (h / 2) * k1).eval());
  const State k3 = rhs((y + (h / 2) * k2).eval());
  const State k4 = rhs((y + h * k3).eval());
  return y + (h / 6) * (k1 + Real(2) * k2 + Real(2) * k3 + k4);
}

/// Integrate over [0, span] with `steps` equal RK4 steps.
template <typename State, typename Rhs, typename Real>
State rk4_integrate(State y, Real span, std::size_t steps, Rhs&& rhs) {
  if (steps == 0) return y;
  const Real h = span / static_cast<Real>(steps);
  for (std::size_t k = 0; k < steps; ++k) y = rk4_step(y, h, rhs);
  return y;
}

struct AdaptiveStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

/// Dormand-Prince 5(4) with per-component mixed error control:
///   |err_i| <= abs_tol + rel_tol * max(|y_i|, |y_new_i|) for every i.
/// The solution is propagated with the fifth-order weights.
template <typename Real>
class DormandPrince45 {
 public:
  DormandPrince45(Real abs_tol, Real rel_tol) : abs_tol_(abs_tol), rel_tol_(rel_tol) {
    if (!(abs_tol_ > 0) || !(rel_tol_ > 0)) {
      throw DomainError("DormandPrince45: tolerances must be positive");
    }
  }

  /// Advance y from t0 to t1 exactly (the last step is clipped).
  template <typename State, typename Rhs>
  State advance(State y, Real t0, Real t1, Rhs&& rhs, AdaptiveStats* stats = nullptr) {
    Real t = t0;
    if (!(h_ > 0)) h_ = (t1 - t0) / 100;
    State k1 = rhs(y);
    while (t < t1) {
      const Real h = std::min(h_, t1 - t);
      const State k2 = rhs((y + h * (Real(1) / 5) * k1).eval());
      const State k3 = rhs((y + h * (Real(3) / 40 * k1 + Real(9) / 40 * k2)).eval());
      const State k4 =
          rhs((y + h * (Real(44) / 45 * k1 - Real(56) / 15 * k2 + Real(32) / 9 * k3)).eval());
      const State k5 = rhs((y + h * (Real(19372) / 6561 * k1 - Real(25360) / 2187 * k2 +
                                     Real(64448) / 6561 * k3 - Real(212) / 729 * k4))
                               .eval());
      const State k6 = rhs((y + h * (Real(9017) / 3168 * k1 - Real(355) / 33 * k2 +
                                     Real(46732) / 5247 * k3 + Real(49) / 176 * k4 -
                                     Real(5103) / 18656 * k5))
                               .eval());
      const State y_new = (y + h * (Real(35) / 384 * k1 + Real(500) / 1113 * k3 +
                                    Real(125) / 192 * k4 - Real(2187) / 6784 * k5 +
                                    Real(11) / 84 * k6))
                              .eval();
      const State k7 = rhs(y_new);
      const State err = h * (Real(71) / 57600 * k1 - Real(71) / 16695 * k3 +
                             Real(71) / 1920 * k4 - Real(17253) / 339200 * k5 +
                             Real(22) / 525 * k6 - Real(1) / 40 * k7);

      Real ratio = 0;
      for (Eigen::Index i = 0; i < err.size(); ++i) {
        using std::abs;
        const Real scale =
            abs_tol_ + rel_tol_ * std::max<Real>(abs(y.data()[i]), abs(y_new.data()[i]));
        ratio = std::max<Real>(ratio, abs(err.data()[i]) / scale);
      }
      if (!std::isfinite(ratio)) throw IntegrationError("DormandPrince45: non-finite error estimate");

      const Real factor =
          ratio == 0 ? Real(5)
                     : std::clamp<Real>(Real(0.9) * std::pow(ratio, Real(-0.2)), Real(0.2), Real(5));
      if (ratio <= 1) {
        t = (h == t1 - t) ? t1 : t + h;
        y = y_new;
        k1 = k7;
        if (stats) ++stats->accepted;
        // A clipped final step should not shrink the next interval's first step.
        if (h == h_ || factor < 1) h_ = h * factor;
      } else {
        if (stats) ++stats->rejected;
        h_ = h * factor;
      }
      if (!(h_ > std::abs(t1) * std::numeric_limits<Real>::epsilon())) {
        throw IntegrationError("DormandPrince45: step size underflow at t=" +
                               detail::format_real(t));
      }
    }
    return y;
  }

 private:
  Real abs_tol_;
  Real rel_tol_;
  Real h_ = 0;
};

}  // namespace alphavac
