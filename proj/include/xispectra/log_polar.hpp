#pragma once

#include <cmath>
#include <complex>
#include <limits>

#include "xispectra/numeric.hpp"

namespace xispectra {

// Complex value as (log-modulus, phase). Survives the exp(-pi t/4) decay of
// xi at large heights where a plain double underflows. log_mod == -inf encodes
// the exact value 0 (phase then unconstrained). The phase is whatever the
// producer says it is: composition sums per-factor principal branches and is
// not reduced mod 2*pi.
struct LogPolarValue {
  double log_mod = -std::numeric_limits<double>::infinity();
  double phase = 0.0;

  static LogPolarValue zero() { return {}; }

  static LogPolarValue from_complex(Cplx z) {
    if (z == Cplx(0.0, 0.0)) return zero();
    return {std::log(std::abs(z)), std::arg(z)};
  }

  Cplx to_complex() const {
    if (std::isinf(log_mod) && log_mod < 0) return {0.0, 0.0};
    return std::polar(std::exp(log_mod), phase);
  }
};

}  // namespace xispectra
