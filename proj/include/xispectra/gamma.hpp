#pragma once

// log Gamma on the cut plane C \ (-inf, 0], Stirling series after a recurrence
// shift into Re z >= 12. Continuous branch, real on the positive real axis.

#include <cmath>
#include <complex>

#include "xispectra/errors.hpp"
#include "xispectra/numeric.hpp"

namespace xispectra {

namespace detail {

// B_{2k} / (2k (2k-1)) for k = 1..12.
inline constexpr double kStirlingCoeff[12] = {
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
    77683.0 / 5796.0,
    -236364091.0 / 1506960.0};

inline constexpr double kHalfLogTwoPi = 0.918938533204672741780329736405617639;

}  // namespace detail

inline Cplx log_gamma(Cplx z) {
  if (!is_finite(z)) throw Error("log_gamma: non-finite argument");
  if (std::abs(z.imag()) < 1e-12) {
    const double r = std::round(z.real());
    if (r <= 0.0 && std::abs(z.real() - r) < 1e-12)
      throw PoleAtNonPositiveInteger("log_gamma: pole at non-positive integer");
  }
  // For Im z < 0 use the conjugation symmetry so the shift logic only sees the
  // closed upper half-plane.
  if (z.imag() < 0.0) return std::conj(log_gamma(std::conj(z)));

  Cplx shift_sum = 0.0;
  Cplx w = z;
  while (w.real() < 12.0 && std::abs(w) < 1e5) {
    shift_sum += std::log(w);  // principal log; w stays off (-inf,0]
    w += 1.0;
  }
  const Cplx lw = std::log(w);
  Cplx res = (w - 0.5) * lw - w + detail::kHalfLogTwoPi;
  Cplx w_pow = w;
  const Cplx w2 = w * w;
  for (double c : detail::kStirlingCoeff) {
    res += c / w_pow;
    w_pow *= w2;
  }
  return res - shift_sum;
}

}  // namespace xispectra
