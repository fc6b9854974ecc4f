#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <vector>

#include "xispectra/errors.hpp"

namespace xispectra {

using Cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kLogPi = 1.144729885849400174143427351353058712;
// 2*pi*e; zeros below this ordinate have no first normalization.
inline constexpr double kTwoPiE = 17.079468445347134;

inline bool is_finite(Cplx z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Neumaier-compensated accumulator. Used wherever the contracts demand
// order-independent-to-rounding sums (telescoping identities, functionals).
class KahanSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double kahan_total(const std::vector<double>& xs) {
  KahanSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

// Trapezoid rule on a uniform grid.
inline double trapezoid_uniform(const std::vector<double>& f, double h) {
  if (f.size() < 2) return 0.0;
  KahanSum s;
  s.add(0.5 * f.front());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) s.add(f[i]);
  s.add(0.5 * f.back());
  return s.value() * h;
}

// Trapezoid rule on an arbitrary sorted grid.
inline double trapezoid(const std::vector<double>& x, const std::vector<double>& f) {
  KahanSum s;
  for (std::size_t i = 0; i + 1 < x.size(); ++i)
    s.add(0.5 * (f[i] + f[i + 1]) * (x[i + 1] - x[i]));
  return s.value();
}

}  // namespace xispectra
