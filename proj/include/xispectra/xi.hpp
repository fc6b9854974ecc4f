#pragma once

// Completed zeta: xi(s) = 1/2 s(s-1) pi^{-s/2} Gamma(s/2) zeta(s), assembled
// in log-polar form, plus the shifted-line evaluations that drive the A/B
// zero scans.

#include <cmath>
#include <complex>

#include "xispectra/gamma.hpp"
#include "xispectra/log_polar.hpp"
#include "xispectra/zeta.hpp"

namespace xispectra {

inline constexpr double kXiAtZero = 0.5;  // xi(0) = xi(1) = 1/2
// radius of the disc around s = 0, 1 where the closed limit value is returned
inline constexpr double kXiSingularRadius = 1e-8;

namespace detail {

// log xi(s) as a complex number (Re = log modulus, Im = summed principal
// phases of the five factors).
inline Cplx log_xi(Cplx s) {
  const Cplx z = zeta(s);
  if (z == Cplx(0.0, 0.0)) return Cplx(-std::numeric_limits<double>::infinity(), 0.0);
  return std::log(Cplx(0.5)) + std::log(s) + std::log(s - 1.0) -
         (s / 2.0) * kLogPi + log_gamma(s / 2.0) + std::log(z);
}

}  // namespace detail

inline LogPolarValue xi(Cplx s) {
  if (!is_finite(s)) throw Error("xi: non-finite argument");
  if (std::abs(s.imag()) > 1e5) throw RangeExceeded("xi: |Im s| > 1e5");
  if (std::abs(s) <= kXiSingularRadius || std::abs(s - 1.0) <= kXiSingularRadius)
    return {std::log(kXiAtZero), 0.0};  // removable 0*inf at s = 0, 1
  const Cplx l = detail::log_xi(s);
  return {l.real(), l.imag()};
}

struct XiShifted {
  double a_scaled;   // r * A_omega(1/2+it) = r * Re xi(1/2+omega+it)
  double b_scaled;   // r * B_omega(1/2+it) = r * (-Im xi(1/2+omega+it))
  double scale_log;  // r = exp(-scale_log) > 0
};

// Scaled A/B values on the critical line. The positive scale r = exp(-log|xi|)
// keeps max(|a|,|b|) = 1 away from zeros while preserving both signs.
inline XiShifted xi_shifted(double omega, double t) {
  if (!(omega > 0.0)) throw Error("xi_shifted: omega must be positive");
  if (std::abs(t) > 1e5) throw RangeExceeded("xi_shifted: |t| > 1e5");
  const Cplx s(0.5 + omega, t);
  if (std::abs(s) <= kXiSingularRadius || std::abs(s - 1.0) <= kXiSingularRadius) {
    // only reachable at t ~ 0 with omega ~ 1/2 where xi = 1/2 exactly
    return {1.0, 0.0, std::log(kXiAtZero)};
  }
  const Cplx l = detail::log_xi(s);
  return {std::cos(l.imag()), -std::sin(l.imag()), l.real()};
}

}  // namespace xispectra
