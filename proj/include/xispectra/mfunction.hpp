#pragma once

// The Fourier transform Mtilde_sigma of the value-distribution density of
// zeta'/zeta on a vertical line, built from its Euler product over primes,
// inverted to the m-density by a cosine transform, plus the moment machinery
// (mu_sigma, the theoretical gap density, the Gaussian limit, GUE surmise).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "xispectra/errors.hpp"
#include "xispectra/lambda.hpp"
#include "xispectra/numeric.hpp"
#include "xispectra/primes.hpp"
#include "xispectra/version.hpp"
#include "xispectra/zeta.hpp"

namespace xispectra {

// sum_n Lambda(n)^2 n^{-s} for s > 1, via the identity
//   F(s) = (zeta'/zeta)'(s) - H(s),
//   H(s) = sum_p (log p)^2 p^{-2s} / (1 - p^{-s})^2,
// where H converges fast for s > 1 (terms ~ p^{-2s}). This reaches any
// requested tolerance arbitrarily close to s = 1, where the raw Dirichlet
// series needs astronomically many terms.
inline double lambda_sq_dirichlet(double s, double rel_tol = 1e-10) {
  if (!(s > 1.0)) throw Error("lambda_sq_dirichlet: s > 1 required");
  if (!(rel_tol >= 1e-13)) rel_tol = 1e-13;
  const Cplx g = log_deriv_zeta_prime(Cplx(s, 0.0));
  std::uint32_t limit = 200'000;
  double h_prev = -1.0, h_cur = 0.0;
  for (int attempt = 0; attempt < 4; ++attempt) {
    const auto primes = primes_up_to(limit);
    KahanSum h;
    for (std::uint32_t p : primes) {
      const double lp = std::log((double)p);
      const double ps = std::pow((double)p, -s);
      const double denom = 1.0 - ps;
      h.add(lp * lp * ps * ps / (denom * denom));
    }
    h_cur = h.value();
    // tail of H: integral bound int_P (log x)^2 x^{-2s} dx / log x
    const double lp = std::log((double)limit);
    const double tail = lp * std::pow((double)limit, 1.0 - 2.0 * s) / (2.0 * s - 1.0) *
                        (1.0 + 1.0 / ((2.0 * s - 1.0) * lp));
    if (tail < rel_tol * std::abs(g.real() - h_cur) || h_cur == h_prev) break;
    h_prev = h_cur;
    limit *= 4;
  }
  return g.real() - h_cur;
}

// mu_sigma = sum Lambda(n)^2 n^{-2 sigma}, the variance of the 2-D value
// distribution. Analytic route; the literal series is mu_sigma_series.
inline double mu_sigma(double sigma, double rel_tol = 1e-10) {
  if (!(sigma > 0.5)) throw Error("mu_sigma: sigma > 1/2 required");
  return lambda_sq_dirichlet(2.0 * sigma, rel_tol);
}

// Truncated series with the all-n integral tail bound; only converges for
// sigma comfortably above 1/2.
inline double mu_sigma_series(double sigma, double rel_tol) {
  if (!(sigma > 0.5)) throw Error("mu_sigma_series: sigma > 1/2 required");
  if (sigma < 0.52 && rel_tol < 1e-6)
    throw SlowConvergence("mu_sigma_series: sigma too close to 1/2");
  const double a = 2.0 * sigma - 1.0;
  auto tail_bound = [&](double n) {
    const double ln = std::log(n);
    return std::pow(n, -a) * (ln * ln / a + 2.0 * ln / (a * a) + 2.0 / (a * a * a));
  };
  double scale = lambda_sq_dirichlet(2.0 * sigma, 1e-8);
  double n_req = 100.0;
  while (tail_bound(n_req) > rel_tol * scale) {
    n_req *= 2.0;
    if (n_req > 1e8) throw SlowConvergence("mu_sigma_series: truncation beyond 1e8");
  }
  const std::uint32_t n_max = (std::uint32_t)n_req;
  const auto primes = primes_up_to(n_max);
  KahanSum sum;
  for (std::uint32_t p : primes) {
    const double lp = std::log((double)p);
    const double ratio = std::pow((double)p, -2.0 * sigma);
    double pw = ratio;
    double pk = (double)p;
    while (true) {
      sum.add(lp * lp * pw);
      if (pk > (double)n_max / (double)p) break;
      pk *= (double)p;
      pw *= ratio;
    }
  }
  return sum.value();
}

// Local Euler factor Mtilde_{sigma,p}(x) = sum_j lambda_x(p^j)^2 p^{-2 j sigma}
// with x real. The two polynomial evaluations are multiplied as written --
// never modulus-squared, the x^2 coefficient must come out negative.
// j_cutoff = 0 selects the adaptive depth.
inline Cplx mtilde_local(double sigma, std::uint64_t p, double x, int j_cutoff = 0) {
  if (!(sigma > 0.5)) throw Error("mtilde_local: sigma > 1/2 required");
  const double lp = std::log((double)p);
  const double r = std::pow((double)p, -2.0 * sigma);  // p^{-2 sigma}
  const Cplx w(0.0, -0.5 * lp * x);                    // (-i/2) (log p) x
  const int j_max = j_cutoff > 0 ? j_cutoff : 220;
  Cplx acc = 1.0;
  double rj = 1.0;
  double last_mag = 0.0;
  int small_run = 0;
  for (int j = 1; j <= j_max; ++j) {
    rj *= r;
    // lambda_x(p^j) = sum_{k=1..j} C(j-1,k-1) w^k / k!
    Cplx lam = 0.0;
    double binom = 1.0;
    double kfact = 1.0;
    Cplx wk = w;
    for (int k = 1; k <= j; ++k) {
      if (k > 1) {
        binom = binom * (double)(j - k + 1) / (double)(k - 1);
        kfact *= k;
        wk *= w;
      }
      lam += wk * (binom / kfact);
    }
    const Cplx term = lam * lam * rj;
    acc += term;
    last_mag = std::abs(term);
    if (last_mag < 1e-17 * std::max(1.0, std::abs(acc))) {
      if (++small_run >= 2 && j_cutoff == 0) break;
    } else {
      small_run = 0;
    }
  }
  if (j_cutoff > 0) {
    // explicit depth requested: the geometric tail estimate must be small
    const double tail = last_mag * r / std::max(1e-300, 1.0 - r);
    if (tail > 1e-12 * std::max(1.0, std::abs(acc)))
      throw TailTooLarge("mtilde_local: truncated tail above 1e-12");
  }
  return acc;
}

// Third cumulant of Re zeta'/zeta on the sigma-line; scales the legitimate
// imaginary part of the truncated Euler product on the real axis
// (|Im log Mtilde(x)| ~ kappa3 |x|^3 / 6).
inline double re_third_cumulant(double sigma, std::uint32_t prime_cutoff = 20000) {
  const auto primes = primes_up_to(prime_cutoff);
  KahanSum acc;
  for (std::uint32_t p : primes) {
    const double lp = std::log((double)p);
    const double r = std::pow((double)p, -2.0 * sigma);
    double rk = r * r;  // p^{-4 sigma} at k = 2
    double inner = 0.0;
    for (int k = 2; k < 80; ++k) {
      const double t = (k - 1) * rk;
      inner += t;
      rk *= r;
      if (t < 1e-18) break;
    }
    acc.add(0.75 * lp * lp * lp * inner);
  }
  return acc.value();
}

struct MtildeResult {
  double value = 0.0;       // Re of the (tail-completed) product
  double imag = 0.0;        // discarded imaginary part
  double tail_quadratic = 0.0;  // tau_P: variance mass beyond the prime cutoff
};

namespace detail {

struct MtildeContext {
  double sigma = 0.0;
  std::uint32_t prime_cutoff = 0;
  std::vector<double> log_p;     // log p, p <= cutoff
  std::vector<double> p_pow;     // p^{-2 sigma}
  double tau = 0.0;              // mu_sigma - captured local variance mass
  double kappa3 = 0.0;           // skew scale for the imaginary-residue envelope
  mutable int max_depth = 0;     // deepest local truncation seen (reporting)

  MtildeContext(double sigma_, std::uint32_t cutoff) : sigma(sigma_), prime_cutoff(cutoff) {
    const auto primes = primes_up_to(cutoff);
    log_p.reserve(primes.size());
    p_pow.reserve(primes.size());
    KahanSum head;
    for (std::uint32_t p : primes) {
      const double lp = std::log((double)p);
      const double r = std::pow((double)p, -2.0 * sigma);
      log_p.push_back(lp);
      p_pow.push_back(r);
      head.add(lp * lp * r / (1.0 - r));
    }
    tau = mu_sigma(sigma) - head.value();
    if (tau < 0.0) tau = 0.0;  // rounding guard for huge cutoffs
    kappa3 = re_third_cumulant(sigma, std::min<std::uint32_t>(cutoff, 30000));
  }

  // local factor with precomputed (log p, p^{-2 sigma})
  Cplx local(double lp, double r, double x) const {
    const Cplx w(0.0, -0.5 * lp * x);
    Cplx acc = 1.0;
    double rj = 1.0;
    int small_run = 0;
    for (int j = 1; j <= 220; ++j) {
      rj *= r;
      Cplx lam = w;
      double binom = 1.0, kfact = 1.0;
      Cplx wk = w;
      for (int k = 2; k <= j; ++k) {
        binom = binom * (double)(j - k + 1) / (double)(k - 1);
        kfact *= k;
        wk *= w;
        lam += wk * (binom / kfact);
      }
      const Cplx term = lam * lam * rj;
      acc += term;
      if (std::abs(term) < 1e-17 * std::max(1.0, std::abs(acc))) {
        if (++small_run >= 2) {
          if (j > max_depth) max_depth = j;
          break;
        }
      } else {
        small_run = 0;
      }
    }
    return acc;
  }

  MtildeResult eval(double x, bool complete_tail) const {
    Cplx prod = 1.0;
    for (std::size_t i = 0; i < log_p.size(); ++i) {
      prod *= local(log_p[i], p_pow[i], x);
      if (std::abs(prod) < 1e-200) break;  // deep in the decayed regime
    }
    if (complete_tail) prod *= std::exp(-x * x * tau / 4.0);
    MtildeResult res;
    res.value = prod.real();
    res.imag = prod.imag();
    res.tail_quadratic = tau;
    const double env =
        std::abs(prod) * std::min(1.0, kappa3 * std::abs(x * x * x) / 4.0 + 1e-9) + 1e-13;
    if (std::abs(res.imag) > env)
      throw ImaginaryResidue("mtilde: imaginary residue beyond the skew envelope");
    return res;
  }
};

}  // namespace detail

// Truncated Euler product on the real frequency axis. complete_tail appends
// the analytic factor exp(-x^2 tau_P / 4) accounting for the variance mass of
// the primes beyond the cutoff (their local factors are 1 - x^2 (log p)^2 /
// (4 p^{2 sigma}) + ... to working precision).
inline double mtilde(double sigma, double x, std::uint32_t prime_cutoff,
                     bool complete_tail = true) {
  if (!(sigma > 0.5)) throw Error("mtilde: sigma > 1/2 required");
  if (prime_cutoff < 1000) throw Error("mtilde: prime_cutoff >= 1e3");
  detail::MtildeContext ctx(sigma, prime_cutoff);
  return ctx.eval(x, complete_tail).value;
}

struct QuadratureMeta {
  double x_max = 0.0;
  double x_step = 0.0;
  double tau = 0.0;            // tail-completion quadratic coefficient (times 1/4)
  double max_imag_residue = 0.0;
  double richardson_diff = 0.0;  // sup |m_h - m_{h/2}|
  int j_cutoff = 0;              // deepest adaptive local depth seen (reporting)
  bool tail_completed = true;
};

struct MDensityTable {
  double sigma = 0.0;
  std::uint32_t prime_cutoff = 0;
  std::vector<double> x_grid;
  std::vector<double> mtilde_values;
  std::vector<double> u_grid;
  std::vector<double> m_values;
  QuadratureMeta meta;
};

// m_sigma(u) = 2 int_0^xmax Re Mtilde(x) cos(xu) dx on the given u grid
// (even in u by construction). x_max = 0 or x_step = 0 pick automatic values:
// x_max where |Mtilde| stays below 1e-10, x_step = min(0.05, pi/(2 max|u|)).
inline MDensityTable m_density(double sigma, const std::vector<double>& u_grid,
                               std::uint32_t prime_cutoff, double x_max = 0.0,
                               double x_step = 0.0) {
  if (!(sigma > 0.5)) throw Error("m_density: sigma > 1/2 required");
  if (u_grid.size() < 2) throw Error("m_density: u grid too small");
  for (std::size_t i = 0; i + 1 < u_grid.size(); ++i)
    if (!(u_grid[i] < u_grid[i + 1])) throw UnsortedEdges("m_density: u grid not sorted");

  detail::MtildeContext ctx(sigma, prime_cutoff);

  double max_imag = 0.0;
  auto mt = [&](double x) {
    MtildeResult r = ctx.eval(x, true);
    max_imag = std::max(max_imag, std::abs(r.imag));
    return r.value;
  };

  if (x_max <= 0.0) {
    // walk out in coarse steps until the transform is dead for a full stretch
    int quiet = 0;
    double x = 0.0;
    while (quiet < 6) {
      x += 0.25;
      if (x > 400.0) throw InsufficientDecay("m_density: Mtilde has not decayed by x = 400");
      quiet = std::abs(mt(x)) < 1e-10 ? quiet + 1 : 0;
    }
    x_max = x;
  } else {
    if (std::abs(mt(x_max)) > 1e-8)
      throw InsufficientDecay("m_density: |Mtilde(x_max)| > 1e-8");
  }

  const double u_abs_max = std::max(std::abs(u_grid.front()), std::abs(u_grid.back()));
  if (x_step <= 0.0) x_step = std::min(0.05, kPi / (2.0 * std::max(u_abs_max, 1.0)));

  MDensityTable table;
  table.sigma = sigma;
  table.prime_cutoff = prime_cutoff;
  table.u_grid = u_grid;

  auto build_m = [&](double h, std::vector<double>* x_out, std::vector<double>* mt_out)
      -> std::vector<double> {
    // uniform grid, last node at or just beyond x_max (the tail there is dead)
    const std::size_t nx = (std::size_t)std::ceil(x_max / h) + 1;
    std::vector<double> xs(nx), vals(nx);
    for (std::size_t i = 0; i < nx; ++i) {
      xs[i] = (double)i * h;
      vals[i] = mt(xs[i]);
    }
    std::vector<double> m(u_grid.size());
    for (std::size_t k = 0; k < u_grid.size(); ++k) {
      const double u = u_grid[k];
      KahanSum s;
      for (std::size_t i = 0; i < nx; ++i) {
        const double w = (i == 0 || i + 1 == nx) ? 0.5 : 1.0;
        s.add(w * vals[i] * std::cos(xs[i] * u));
      }
      m[k] = 2.0 * s.value() * h;
    }
    if (x_out) *x_out = std::move(xs);
    if (mt_out) *mt_out = std::move(vals);
    return m;
  };

  std::vector<double> m_coarse = build_m(x_step, nullptr, nullptr);
  double diff = 0.0;
  std::vector<double> m_fine;
  for (int halving = 0; halving < 4; ++halving) {
    m_fine = build_m(x_step / 2.0, &table.x_grid, &table.mtilde_values);
    diff = 0.0;
    for (std::size_t k = 0; k < m_fine.size(); ++k)
      diff = std::max(diff, std::abs(m_fine[k] - m_coarse[k]));
    if (diff <= 1e-5) break;
    x_step /= 2.0;
    m_coarse = std::move(m_fine);
  }
  if (diff > 1e-5)
    throw Error("m_density: cosine transform did not stabilize to 1e-5");

  table.m_values = std::move(m_fine);
  table.meta.x_max = x_max;
  table.meta.x_step = x_step / 2.0;
  table.meta.tau = ctx.tau;
  table.meta.max_imag_residue = max_imag;
  table.meta.richardson_diff = diff;
  table.meta.j_cutoff = ctx.max_depth;
  table.meta.tail_completed = true;

  // invariants: Mtilde(0) = 1, normalization (1/2pi) int m = 1 within 1e-3
  if (std::abs(table.mtilde_values.front() - 1.0) > 1e-10)
    throw Error("m_density: Mtilde(0) != 1");
  const double mass = trapezoid(table.u_grid, table.m_values) / kTwoPi;
  if (std::abs(mass - 1.0) > 1e-3)
    throw Error("m_density: (1/2pi) int m du = " + std::to_string(mass));
  return table;
}

// Theorem-side gap density g(u) = (1/2pi) pi sqrt(rho) m(pi sqrt(rho) u),
// linear interpolation on the table grid.
inline double gap_density(double omega, double u, const MDensityTable& table) {
  const double sigma = 0.5 + omega;
  if (std::abs(table.sigma - sigma) > 1e-12)
    throw MismatchedOmega("gap_density: table sigma does not match omega");
  const double rho = mu_sigma(sigma) / (2.0 * kPi * kPi);
  const double scale = kPi * std::sqrt(rho);
  const double v = scale * u;
  if (v < table.u_grid.front() || v > table.u_grid.back())
    throw OutOfTableRange("gap_density: argument outside table");
  const auto it = std::upper_bound(table.u_grid.begin(), table.u_grid.end(), v);
  std::size_t hi = (std::size_t)(it - table.u_grid.begin());
  if (hi == 0) hi = 1;
  if (hi >= table.u_grid.size()) hi = table.u_grid.size() - 1;
  const std::size_t lo = hi - 1;
  const double t = (v - table.u_grid[lo]) / (table.u_grid[hi] - table.u_grid[lo]);
  const double m = table.m_values[lo] * (1.0 - t) + table.m_values[hi] * t;
  return scale * m / kTwoPi;
}

// sup over |u| <= 5 of |g_omega(u) - standard normal pdf|.
inline double gaussian_limit_error(double omega, const MDensityTable& table) {
  if (!(omega <= 0.3)) throw Error("gaussian_limit_error: omega <= 0.3");
  double sup = 0.0;
  const int n = 1001;
  for (int i = 0; i < n; ++i) {
    const double u = -5.0 + 10.0 * i / (n - 1);
    const double g = gap_density(omega, u, table);
    const double target = std::exp(-0.5 * u * u) / std::sqrt(kTwoPi);
    sup = std::max(sup, std::abs(g - target));
  }
  return sup;
}

// GUE nearest-neighbour surmise, contrast curve only.
inline double gue_surmise(double u) {
  return (32.0 / (kPi * kPi)) * u * u * std::exp(-4.0 * u * u / kPi);
}

// ---- MDensityTable JSON persistence ----

struct TableTolerances {
  double richardson = 1e-5;
  double imag_residue = 1.0;  // skew-scaled; callers may tighten
};

inline nlohmann::json to_json(const MDensityTable& t) {
  nlohmann::json j;
  j["format"] = "xi-spectra mdensity v1";
  j["library_version"] = version_string;
  j["sigma"] = t.sigma;
  j["prime_cutoff"] = t.prime_cutoff;
  j["x_max"] = t.meta.x_max;
  j["x_step"] = t.meta.x_step;
  j["tolerances"] = {{"richardson", t.meta.richardson_diff},
                     {"imag_residue", t.meta.max_imag_residue}};
  j["tail"] = {{"quadratic_coefficient", t.meta.tau},
               {"completed", t.meta.tail_completed}};
  j["x_grid"] = t.x_grid;
  j["mtilde_values"] = t.mtilde_values;
  j["u_grid"] = t.u_grid;
  j["m_values"] = t.m_values;
  return j;
}

inline void save_mdensity(const MDensityTable& t, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw LoadError("save_mdensity: cannot open " + path);
  os << to_json(t).dump(2) << "\n";
}

inline MDensityTable load_mdensity(const std::string& path,
                                   const TableTolerances& requested = {}) {
  std::ifstream is(path);
  if (!is) throw LoadError("load_mdensity: cannot open " + path);
  nlohmann::json j;
  try {
    is >> j;
  } catch (const std::exception& e) {
    throw LoadError(std::string("load_mdensity: parse failure: ") + e.what());
  }
  MDensityTable t;
  try {
    if (j.at("format") != "xi-spectra mdensity v1")
      throw LoadError("load_mdensity: unknown format");
    t.sigma = j.at("sigma");
    t.prime_cutoff = j.at("prime_cutoff");
    t.meta.x_max = j.at("x_max");
    t.meta.x_step = j.at("x_step");
    t.meta.richardson_diff = j.at("tolerances").at("richardson");
    t.meta.max_imag_residue = j.at("tolerances").at("imag_residue");
    t.meta.tau = j.at("tail").at("quadratic_coefficient");
    t.meta.tail_completed = j.at("tail").at("completed");
    t.x_grid = j.at("x_grid").get<std::vector<double>>();
    t.mtilde_values = j.at("mtilde_values").get<std::vector<double>>();
    t.u_grid = j.at("u_grid").get<std::vector<double>>();
    t.m_values = j.at("m_values").get<std::vector<double>>();
  } catch (const LoadError&) {
    throw;
  } catch (const std::exception& e) {
    throw LoadError(std::string("load_mdensity: bad table: ") + e.what());
  }
  if (t.x_grid.size() != t.mtilde_values.size() || t.u_grid.size() != t.m_values.size())
    throw LoadError("load_mdensity: grid/value size mismatch");
  if (t.meta.richardson_diff > requested.richardson)
    throw LoadError("load_mdensity: table richardson tolerance exceeds request");
  if (t.meta.max_imag_residue > requested.imag_residue)
    throw LoadError("load_mdensity: table imaginary residue exceeds request");
  return t;
}

}  // namespace xispectra
