#pragma once

// Higher von Mangoldt functions Lambda_k (k-fold Dirichlet self-convolutions
// of Lambda) and the polynomials lambda_z(n) = sum_k (-i/2)^k Lambda_k(n)/k! z^k.

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "xispectra/errors.hpp"
#include "xispectra/numeric.hpp"
#include "xispectra/primes.hpp"

namespace xispectra {

class LambdaTable {
 public:
  LambdaTable(std::uint32_t n_max, int k_max) : n_max_(n_max), k_max_(k_max) {
    if (n_max > 1'000'000 || k_max > 25)
      throw CapacityExceeded("build_lambda_table: n_max <= 1e6, k_max <= 25");
    values_.resize(k_max + 1);
    values_[0].assign(n_max + 1, 0.0);
    if (n_max >= 1) values_[0][1] = 1.0;  // Lambda_0 = [n = 1]
    if (k_max >= 1) {
      values_[1].assign(n_max + 1, 0.0);
      for (std::uint32_t n = 2; n <= n_max; ++n) values_[1][n] = von_mangoldt(n);
    }
    for (int k = 2; k <= k_max; ++k) {
      const auto& prev = values_[k - 1];
      auto& cur = values_[k];
      cur.assign(n_max + 1, 0.0);
      // Lambda_k = Lambda_{k-1} * Lambda; outer loop over prime powers a
      for (std::uint32_t a = 2; a <= n_max; ++a) {
        const double la = values_[1][a];
        if (la == 0.0) continue;
        const std::uint32_t b_max = n_max / a;
        for (std::uint32_t b = 1; b <= b_max; ++b) {
          const double pb = prev[b];
          if (pb != 0.0) cur[a * b] += la * pb;
        }
      }
    }
  }

  double value(std::uint32_t n, int k) const {
    if (n > n_max_ || k > k_max_) throw CapacityExceeded("LambdaTable::value: out of range");
    return values_[k][n];
  }

  std::uint32_t n_max() const { return n_max_; }
  int k_max() const { return k_max_; }

 private:
  std::uint32_t n_max_;
  int k_max_;
  std::vector<std::vector<double>> values_;  // [k][n]
};

inline LambdaTable build_lambda_table(std::uint32_t n_max, int k_max) {
  return LambdaTable(n_max, k_max);
}

// lambda_z(n) as an explicit polynomial; coeffs[k] = (-i/2)^k Lambda_k(n)/k!.
struct LambdaPolynomial {
  std::uint32_t n = 1;
  std::vector<Cplx> coeffs;

  Cplx eval(Cplx z) const {
    Cplx acc = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * z + coeffs[k];
    return acc;
  }

  LambdaPolynomial operator*(const LambdaPolynomial& rhs) const {
    LambdaPolynomial out;
    out.n = n * rhs.n;
    out.coeffs.assign(coeffs.size() + rhs.coeffs.size() - 1, Cplx(0));
    for (std::size_t i = 0; i < coeffs.size(); ++i)
      for (std::size_t j = 0; j < rhs.coeffs.size(); ++j)
        out.coeffs[i + j] += coeffs[i] * rhs.coeffs[j];
    return out;
  }
};

inline LambdaPolynomial lambda_poly(std::uint32_t n, const LambdaTable& table) {
  if (n > table.n_max()) throw TableTooShallow("lambda_poly: n exceeds table");
  const int degree = big_omega(n);
  if (degree > table.k_max()) throw TableTooShallow("lambda_poly: Omega(n) exceeds table depth");
  LambdaPolynomial poly;
  poly.n = n;
  poly.coeffs.resize(degree + 1);
  double kfact = 1.0;
  Cplx ihalf_pow = 1.0;  // (-i/2)^k
  for (int k = 0; k <= degree; ++k) {
    if (k > 0) {
      kfact *= k;
      ihalf_pow *= Cplx(0.0, -0.5);
    }
    poly.coeffs[k] = ihalf_pow * (table.value(n, k) / kfact);
  }
  return poly;
}

// Closed form at prime powers: Lambda_k(p^j) = (log p)^k C(j-1, k-1), the
// number of compositions of j into k positive parts times (log p)^k.
inline LambdaPolynomial lambda_prime_power_poly(std::uint64_t p, int j) {
  LambdaPolynomial poly;
  double npow = std::pow((double)p, (double)j);
  poly.n = npow <= 4e9 ? (std::uint32_t)(npow + 0.5) : 0;  // 0: beyond index range
  poly.coeffs.resize(j + 1);
  poly.coeffs[0] = (j == 0) ? 1.0 : 0.0;
  const double lp = std::log((double)p);
  double binom = 1.0;   // C(j-1, k-1)
  double kfact = 1.0;
  double lp_pow = 1.0;
  Cplx ihalf_pow = 1.0;
  for (int k = 1; k <= j; ++k) {
    kfact *= k;
    lp_pow *= lp;
    ihalf_pow *= Cplx(0.0, -0.5);
    if (k > 1) binom = binom * (double)(j - k + 1) / (double)(k - 1);
    poly.coeffs[k] = ihalf_pow * (lp_pow * binom / kfact);
  }
  return poly;
}

}  // namespace xispectra
