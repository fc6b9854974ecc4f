#pragma once

// First and second normalizations of zero ordinates, gap functionals, and the
// log-derivative / line-average statistics they are cross-validated against.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "xispectra/errors.hpp"
#include "xispectra/mfunction.hpp"
#include "xispectra/numeric.hpp"
#include "xispectra/zero_engine.hpp"

namespace xispectra {

// rho_omega = (1/2pi^2) sum Lambda(n)^2 / n^{1+2 omega}.
//
// Production route: the analytic identity sum Lambda(n)^2 n^{-s} =
// (zeta'/zeta)'(s) - sum_p (log p)^2 p^{-2s}/(1-p^{-s})^2, machine-accurate
// for every omega > 0. The literal truncated series (rho_omega_series) is kept
// as an oracle where it converges.
inline double rho_omega(double omega, double rel_tol = 1e-10) {
  if (!(omega > 0.0)) throw Error("rho_omega: omega must be positive");
  return lambda_sq_dirichlet(1.0 + 2.0 * omega, rel_tol) / (2.0 * kPi * kPi);
}

// Direct truncated series with the all-n integral tail bound
// int_N^inf (log x)^2 x^{-1-2w} dx <= rel_tol * partial sum.
inline double rho_omega_series(double omega, double rel_tol) {
  if (!(omega > 0.0)) throw Error("rho_omega_series: omega must be positive");
  if (!(rel_tol >= 1e-12)) throw Error("rho_omega_series: rel_tol >= 1e-12");
  const double a = 2.0 * omega;
  auto tail_bound = [&](double n) {
    const double ln = std::log(n);
    return std::pow(n, -a) * (ln * ln / a + 2.0 * ln / (a * a) + 2.0 / (a * a * a));
  };
  // find the needed truncation first
  double n_req = 100.0;
  double partial_est = lambda_sq_dirichlet(1.0 + a, 1e-8);  // scale only
  while (tail_bound(n_req) > rel_tol * partial_est) {
    n_req *= 2.0;
    if (n_req > 1e8)
      throw SlowConvergence("rho_omega_series: truncation beyond 1e8 required");
  }
  const std::uint32_t n_max = (std::uint32_t)n_req;
  const auto primes = primes_up_to(n_max);
  KahanSum sum;
  for (std::uint32_t p : primes) {
    const double lp = std::log((double)p);
    double pw = std::pow((double)p, -(1.0 + a));
    const double ratio = pw;
    double pk = (double)p;
    while (true) {
      sum.add(lp * lp * pw);
      if (pk > (double)n_max / (double)p) break;
      pk *= (double)p;
      pw *= ratio;
    }
  }
  return sum.value() / (2.0 * kPi * kPi);
}

// gamma^(1) = (gamma/2pi) log(gamma/2pi e).
inline double first_normalization(double gamma) {
  if (!(gamma > kTwoPiE))
    throw DomainTooLow("first_normalization: gamma <= 2 pi e");
  return (gamma / kTwoPi) * std::log(gamma / kTwoPiE);
}

// gamma^(2) = (gamma^(1) - n) rho^{-1/2} (1/2pi) log(gamma/2pi e).
inline double second_normalization(double gamma, std::uint32_t n, double rho) {
  if (!(rho > 0.0)) throw Error("second_normalization: rho must be positive");
  if (n < 1) throw Error("second_normalization: n >= 1");
  const double g1 = first_normalization(gamma);
  return (g1 - (double)n) / std::sqrt(rho) * (std::log(gamma / kTwoPiE) / kTwoPi);
}

struct SpacingSample {
  std::uint32_t index_n = 0;
  double gamma = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  std::optional<double> gap1;  // gamma1[n+1] - gamma1[n]
  std::optional<double> gap2;  // gamma2[n+1] - gamma2[n]
};

// Samples from a complete scan. Zeros with gamma <= 2 pi e keep their rank but
// carry no normalized values and are dropped (the normalization is undefined
// there); the last sample has no gaps.
inline std::vector<SpacingSample> build_samples(const std::vector<ZeroRecord>& zeros,
                                                double rho) {
  std::vector<SpacingSample> out;
  for (const ZeroRecord& z : zeros) {
    if (z.gamma <= kTwoPiE) continue;
    SpacingSample s;
    s.index_n = z.index_n;
    s.gamma = z.gamma;
    s.gamma1 = first_normalization(z.gamma);
    s.gamma2 = second_normalization(z.gamma, z.index_n, rho);
    out.push_back(s);
  }
  for (std::size_t i = 0; i + 1 < out.size(); ++i) {
    if (out[i + 1].index_n == out[i].index_n + 1) {
      out[i].gap1 = out[i + 1].gamma1 - out[i].gamma1;
      out[i].gap2 = out[i + 1].gamma2 - out[i].gamma2;
    }
  }
  return out;
}

// (1/N) sum phi(scale * (gamma2_{n+1} - gamma2_n)) over samples that own a
// gap. scale = 1 gives the second-normalized statistic; scale = sqrt(rho)
// gives the rho^{1/2} gamma^(2) scale the log-derivative statistics live on.
inline double empirical_gap_functional(const std::vector<SpacingSample>& samples,
                                       const std::function<double(double)>& phi,
                                       double scale = 1.0) {
  KahanSum sum;
  std::size_t n = 0;
  for (const SpacingSample& s : samples) {
    if (!s.gap2) continue;
    sum.add(phi(scale * *s.gap2));
    ++n;
  }
  if (n == 0) throw EmptySample("empirical_gap_functional: no gaps");
  return sum.value() / (double)n;
}

// (1/N) sum phi(-(1/pi) Re zeta'/zeta(1/2+omega+i gamma_n)).
inline double logderiv_gap_statistic(double omega, const std::vector<ZeroRecord>& zeros,
                                     const std::function<double(double)>& phi) {
  if (zeros.empty()) throw EmptySample("logderiv_gap_statistic: no zeros");
  KahanSum sum;
  for (const ZeroRecord& z : zeros) {
    const Cplx ld = log_deriv_zeta(Cplx(0.5 + omega, z.gamma));
    sum.add(phi(-ld.real() / kPi));
  }
  return sum.value() / (double)zeros.size();
}

// (1/T) int_0^T phi(-(1/pi) Re zeta'/zeta(sigma+it)) dt, the even-in-t half of
// the paper-side line average. Romberg-accelerated trapezoid, refined until
// two successive levels agree to 1e-4 absolute.
inline double line_average_functional(double omega, double t_max,
                                      const std::function<double(double)>& phi) {
  if (!(omega > 0.0)) throw Error("line_average_functional: omega must be positive");
  if (!(t_max >= 10.0)) throw Error("line_average_functional: T >= 10");
  const double sigma = 0.5 + omega;
  auto f = [&](double t) {
    const Cplx ld = log_deriv_zeta(Cplx(sigma, t));
    return phi(-ld.real() / kPi);
  };
  // Romberg table over halving steps; tolerance applies to the mean (1/T) int.
  std::vector<double> row;
  int n = std::max(256, (int)(t_max / 2.0));
  double h = t_max / n;
  KahanSum base;
  base.add(0.5 * f(0.0));
  for (int i = 1; i < n; ++i) base.add(f(h * i));
  base.add(0.5 * f(t_max));
  double trap = base.value() * h;
  row.push_back(trap);
  for (int level = 1; level <= 9; ++level) {
    KahanSum mid;
    for (int i = 0; i < n; ++i) mid.add(f(h * (i + 0.5)));
    trap = 0.5 * trap + 0.5 * h * mid.value();
    n *= 2;
    h *= 0.5;
    std::vector<double> next;
    next.push_back(trap);
    double p4 = 4.0;
    for (double prev : row) {
      next.push_back((p4 * next.back() - prev) / (p4 - 1.0));
      p4 *= 4.0;
    }
    const double best = next.back();
    const double best_prev = row.back();
    row = std::move(next);
    if (level >= 3 && std::abs(best - best_prev) < 0.5e-4 * t_max) return best / t_max;
  }
  return row.back() / t_max;
}

struct GapHistogram {
  std::vector<double> bin_edges;
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;  // in-range count
};

inline GapHistogram histogram(const std::vector<double>& values,
                              const std::vector<double>& edges) {
  if (edges.size() < 2) throw UnsortedEdges("histogram: need at least two edges");
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    if (!(edges[i] < edges[i + 1])) throw UnsortedEdges("histogram: edges not increasing");
  GapHistogram h;
  h.bin_edges = edges;
  h.counts.assign(edges.size() - 1, 0);
  for (double v : values) {
    if (v < edges.front() || v >= edges.back()) continue;
    const auto it = std::upper_bound(edges.begin(), edges.end(), v);
    const std::size_t bin = (std::size_t)(it - edges.begin()) - 1;
    ++h.counts[bin];
    ++h.total;
  }
  return h;
}

}  // namespace xispectra
