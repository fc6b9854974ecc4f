#pragma once

// Riemann zeta on the half-plane needed by the zero scans: Euler-Maclaurin
// continuation with adaptive truncation, evaluated together with its first
// two s-derivatives so that zeta'/zeta and (zeta'/zeta)' come out of one pass.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "xispectra/errors.hpp"
#include "xispectra/numeric.hpp"

namespace xispectra {

namespace detail {

// B_{2k} for k = 1..10.
inline constexpr double kBernoulli2k[10] = {
    1.0 / 6.0,       -1.0 / 30.0,      1.0 / 42.0,      -1.0 / 30.0,
    5.0 / 66.0,      -691.0 / 2730.0,  7.0 / 6.0,       -3617.0 / 510.0,
    43867.0 / 798.0, -174611.0 / 330.0};

// log(n) for n = 1..size, grown on demand. thread_local keeps the pure-function
// contract without locking.
inline const std::vector<double>& log_table(std::size_t n) {
  thread_local std::vector<double> table{0.0, 0.0};  // [0] unused
  while (table.size() <= n) table.push_back(std::log((double)table.size()));
  return table;
}

}  // namespace detail

struct ZetaJet {
  Cplx z0;  // zeta(s)
  Cplx z1;  // zeta'(s)
  Cplx z2;  // zeta''(s)
};

// Euler-Maclaurin zeta with a fixed truncation N and all ten Bernoulli
// correction terms. Remainder magnitude of the first omitted term is returned
// through `remainder`.
inline ZetaJet zeta_jet_n(Cplx s, std::size_t n_trunc, double* remainder = nullptr) {
  const auto& ln = detail::log_table(n_trunc);
  const double sigma = s.real(), t = s.imag();
  Cplx z0 = 0, z1 = 0, z2 = 0;
  for (std::size_t n = 1; n < n_trunc; ++n) {
    const double l = ln[n];
    const Cplx w = std::polar(std::exp(-sigma * l), -t * l);  // n^{-s}
    z0 += w;
    z1 -= l * w;
    z2 += l * l * w;
  }
  const double lnN = ln[n_trunc];
  const Cplx n_pow = std::polar(std::exp(-sigma * lnN), -t * lnN);  // N^{-s}
  const Cplx sm1 = s - 1.0;
  const Cplx tail = n_pow * (double)n_trunc / sm1;  // N^{1-s}/(s-1)
  z0 += tail;
  z1 += -lnN * tail - tail / sm1;
  z2 += lnN * lnN * tail + 2.0 * lnN * tail / sm1 + 2.0 * tail / (sm1 * sm1);
  const Cplx half = 0.5 * n_pow;
  z0 += half;
  z1 += -lnN * half;
  z2 += lnN * lnN * half;

  double fact = 1.0;
  Cplx u_last = 0;
  for (int k = 1; k <= 10; ++k) {
    fact *= (2 * k) * (2 * k - 1);
    Cplx prod = 1.0, dlog = 0.0, dlog2 = 0.0;
    for (int j = 0; j <= 2 * k - 2; ++j) {
      const Cplx sj = s + (double)j;
      prod *= sj;
      dlog += 1.0 / sj;
      dlog2 += 1.0 / (sj * sj);
    }
    const double l2k = (2.0 * k - 1.0) * lnN;
    const Cplx u = (detail::kBernoulli2k[k - 1] / fact) * prod * n_pow * std::exp(-l2k);
    z0 += u;
    const Cplx d = dlog - lnN;
    z1 += u * d;
    z2 += u * (d * d - dlog2);
    u_last = u;
  }
  if (remainder) {
    // crude but effective: the next correction term is smaller than the last
    // kept one by roughly |s+19|^2 / ((2*21)*(2*21-1) N^2); report the last
    // kept magnitude as the remainder scale.
    *remainder = std::abs(u_last);
  }
  return ZetaJet{z0, z1, z2};
}

// zeta with value and two derivatives; N = max(20, ceil(2|Im s|)), correction
// depth fixed at ten Bernoulli terms which keeps the remainder below ~1e-13
// for sigma >= -3 at the supported heights.
inline ZetaJet zeta_jet(Cplx s, double rel_tol = 1e-12) {
  if (!is_finite(s)) throw Error("zeta: non-finite argument");
  if (std::abs(s.imag()) > 1e5) throw RangeExceeded("zeta: |Im s| > 1e5");
  if (std::abs(s - Cplx(1.0, 0.0)) <= 1e-12) throw PoleAtOne("zeta: s = 1");
  std::size_t n_trunc = std::max<std::size_t>(20, (std::size_t)std::ceil(2.0 * std::abs(s.imag())));
  for (int attempt = 0;; ++attempt) {
    double rem = 0.0;
    ZetaJet j = zeta_jet_n(s, n_trunc, &rem);
    if (rem <= rel_tol * std::max(std::abs(j.z0), 1e-300) || attempt >= 3) return j;
    n_trunc *= 2;  // rare: very negative sigma with small t
  }
}

inline Cplx zeta(Cplx s, double rel_tol = 1e-12) {
  return zeta_jet(s, rel_tol).z0;
}

// zeta'/zeta for Re s > 1/2 (caller keeps away from zeta zeros).
inline Cplx log_deriv_zeta(Cplx s) {
  const ZetaJet j = zeta_jet(s);
  if (std::abs(j.z0) < 1e-13)
    throw NearZeroOfZeta("log_deriv_zeta: |zeta(s)| < 1e-13");
  return j.z1 / j.z0;
}

// (zeta'/zeta)'(s) = zeta''/zeta - (zeta'/zeta)^2.
inline Cplx log_deriv_zeta_prime(Cplx s) {
  const ZetaJet j = zeta_jet(s);
  if (std::abs(j.z0) < 1e-13)
    throw NearZeroOfZeta("log_deriv_zeta_prime: |zeta(s)| < 1e-13");
  const Cplx ld = j.z1 / j.z0;
  return j.z2 / j.z0 - ld * ld;
}

}  // namespace xispectra
