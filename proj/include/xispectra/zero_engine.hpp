#pragma once

// Zero location for A_omega and B_omega on the critical line: sign-change
// scanning on a canonical node ladder, bracketed refinement, the argument
// function S_omega by continuous variation, and the counting-formula
// completeness certificate.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "xispectra/errors.hpp"
#include "xispectra/numeric.hpp"
#include "xispectra/xi.hpp"

namespace xispectra {

enum class Family { A, B };

inline char family_letter(Family f) { return f == Family::A ? 'A' : 'B'; }

inline Family family_from_letter(char c) {
  if (c == 'A' || c == 'a') return Family::A;
  if (c == 'B' || c == 'b') return Family::B;
  throw Error("unknown family letter");
}

// scaled target whose sign changes locate the zeros
inline double scan_target(Family family, double omega, double t) {
  const XiShifted v = xi_shifted(omega, t);
  return family == Family::A ? v.a_scaled : v.b_scaled;
}

struct ZeroRecord {
  Family family = Family::A;
  double omega = 0.0;
  std::uint32_t index_n = 0;  // 1-based rank within the scan
  double gamma = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double residual = 0.0;  // scaled function magnitude at gamma
};

struct ScanReport {
  double omega = 0.0;
  Family family = Family::A;
  double t_max = 0.0;
  double step_factor = 0.2;
  std::vector<ZeroRecord> zeros;  // t > 0 only, increasing gamma
  std::uint64_t count_scanned = 0;
  double count_formula = 0.0;
  double s_omega_at_t = 0.0;
  bool rh_mode = true;
};

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
};

namespace detail {

// Canonical scan ladder. Node k sits at Phi^{-1}(k) where Phi integrates the
// reciprocal step 1/h(t), h(t) = step_factor * 2pi / log(max(t,10)/2pi).
// Windows that partition (t_lo, t_hi] therefore see exactly the same nodes,
// which makes scan results independent of the partition.
class ScanLadder {
 public:
  explicit ScanLadder(double step_factor) : c_(step_factor * kTwoPi) {}

  double phi(double t) const {
    const double l10 = std::log(10.0 / kTwoPi);
    if (t <= 10.0) return t * l10 / c_;
    return (10.0 * l10 + t * std::log(t / kTwoPiE) - 10.0 * std::log(10.0 / kTwoPiE)) / c_;
  }

  double node(double k) const {
    // invert phi by Newton; phi' = log(max(t,10)/2pi)/c
    const double l10 = std::log(10.0 / kTwoPi);
    double t = k * c_ / l10;  // exact inverse of the linear branch
    if (phi(10.0) >= k) return t;
    if (t < 10.0) t = 10.0;
    for (int it = 0; it < 60; ++it) {
      const double f = phi(t) - k;
      const double d = std::log(std::max(t, 10.0) / kTwoPi) / c_;
      const double dt = f / d;
      t -= dt;
      if (std::abs(dt) <= 1e-14 * std::max(t, 1.0)) break;
    }
    return t;
  }

 private:
  double c_;
};

}  // namespace detail

// Sign-change brackets of the scaled A/B target over (t_lo, t_hi].
inline std::vector<Bracket> scan_zeros(double omega, Family family, double t_lo,
                                       double t_hi, double step_factor = 0.2) {
  if (!(omega > 0.0)) throw Error("scan_zeros: omega must be positive");
  if (!(0.0 < t_lo && t_lo < t_hi && t_hi <= 5000.0))
    throw Error("scan_zeros: need 0 < t_lo < t_hi <= 5000");
  if (!(step_factor > 0.0 && step_factor <= 0.5))
    throw Error("scan_zeros: step_factor in (0, 0.5]");

  const detail::ScanLadder ladder(step_factor);
  // left anchor: largest node <= t_lo
  long long k = (long long)std::floor(ladder.phi(t_lo));
  double t_prev = ladder.node((double)k);
  if (t_prev > t_lo) {  // guard against rounding at the boundary
    --k;
    t_prev = ladder.node((double)k);
  }
  auto eval = [&](double t) {
    double v = scan_target(family, omega, t);
    if (std::abs(v) < 1e-12) v = scan_target(family, omega, t + 1e-10);
    return v;
  };
  double f_prev = eval(t_prev);
  std::vector<Bracket> out;
  for (long long kk = k + 1;; ++kk) {
    const double t_cur = ladder.node((double)kk);
    if (t_cur > t_hi) break;
    if (t_cur <= t_lo) {  // node exactly at boundary after rounding
      t_prev = t_cur;
      f_prev = eval(t_cur);
      continue;
    }
    const double f_cur = eval(t_cur);
    if ((f_prev < 0.0) != (f_cur < 0.0)) out.push_back({t_prev, t_cur});
    t_prev = t_cur;
    f_prev = f_cur;
  }
  return out;
}

// Bracketed root refinement: bisection with an interior secant probe, the
// sign-change bracket is never released.
inline ZeroRecord refine_zero(Bracket bracket, const std::function<double(double)>& f,
                              double abs_tol = 1e-10) {
  if (!(abs_tol >= 1e-11)) throw Error("refine_zero: abs_tol >= 1e-11");
  double lo = bracket.lo, hi = bracket.hi;
  double flo = f(lo), fhi = f(hi);
  if ((flo < 0.0) == (fhi < 0.0))
    throw LostBracket("refine_zero: endpoints have equal sign");
  while (hi - lo > abs_tol) {
    double mid = 0.5 * (lo + hi);
    // secant probe, accepted only if strictly inside and well-conditioned
    const double denom = fhi - flo;
    if (denom != 0.0) {
      const double sec = lo - flo * (hi - lo) / denom;
      if (sec > lo + 0.1 * (hi - lo) && sec < hi - 0.1 * (hi - lo)) mid = sec;
    }
    const double fm = f(mid);
    if (fm == 0.0) {
      const double eps = 0.25 * abs_tol;
      lo = mid - eps;
      hi = mid + eps;
      flo = f(lo);
      fhi = f(hi);
      break;
    }
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  ZeroRecord rec;
  rec.gamma = 0.5 * (lo + hi);
  rec.bracket_lo = lo;
  rec.bracket_hi = hi;
  rec.residual = std::abs(f(rec.gamma));
  return rec;
}

// S_omega(t) = (1/pi) arg zeta(1/2+omega+it), continuous variation along
// 2 -> 2+it -> 1/2+omega+it. Each sub-segment contributes the exact principal
// argument of the zeta ratio; node counts double until the unwrapped total is
// stable to 1e-9 and no segment turns by pi/2 or more.
inline double s_omega(double omega, double t) {
  if (!(omega > 0.0)) throw Error("s_omega: omega must be positive");
  if (std::abs(t) > 5000.0) throw RangeExceeded("s_omega: |t| > 5000");
  if (t == 0.0) return 0.0;
  if (t < 0.0) return -s_omega(omega, -t);

  auto run = [&](int n1, int n2, bool* clean) {
    double total = 0.0;
    Cplx prev = zeta(Cplx(2.0, 0.0));
    bool ok = true;
    auto advance = [&](Cplx s) {
      const Cplx cur = zeta(s);
      if (std::abs(cur) < 1e-12) throw PathSingularity("s_omega: |zeta| < 1e-12 on path");
      const double d = std::arg(cur / prev);
      if (std::abs(d) >= kPi / 2.0) ok = false;
      total += d;
      prev = cur;
    };
    for (int i = 1; i <= n1; ++i) advance(Cplx(2.0, t * i / n1));
    const double sig_end = 0.5 + omega;
    for (int i = 1; i <= n2; ++i) advance(Cplx(2.0 + (sig_end - 2.0) * i / n2, t));
    *clean = ok;
    return total / kPi;
  };

  int n1 = std::max(16, (int)std::ceil(t / 0.5));
  int n2 = 32;
  bool clean = false;
  double prev_val = run(n1, n2, &clean);
  for (int level = 0; level < 12; ++level) {
    n1 *= 2;
    n2 *= 2;
    bool clean2 = false;
    const double val = run(n1, n2, &clean2);
    if (clean && clean2 && std::abs(val - prev_val) < 1e-9) return val;
    prev_val = val;
    clean = clean2;
  }
  return prev_val;
}

// Counting formula N(T) = (T/2pi) log(T/2pi e) + S_omega(T) + c(family),
// c = (7+2 omega)/8 for the A family and (3+2 omega)/8 for B; the true count
// differs by O(1/T). The two constants differ by 1/2 because consecutive A and
// B zeros interlace.
inline double count_formula(double omega, double t_max, Family family) {
  if (!(t_max >= 2.0)) throw Error("count_formula: T >= 2");
  if (!(omega > 0.0)) throw Error("count_formula: omega must be positive");
  const double main = (t_max / kTwoPi) * std::log(t_max / kTwoPiE);
  const double c = family == Family::A ? (7.0 + 2.0 * omega) / 8.0 : (3.0 + 2.0 * omega) / 8.0;
  return main + s_omega(omega, t_max) + c;
}

// Full scan over (0, T]: brackets, refinement, ranking, certificate inputs.
inline ScanReport scan_and_refine(double omega, Family family, double t_max,
                                  double step_factor = 0.2, double abs_tol = 1e-10) {
  ScanReport report;
  report.omega = omega;
  report.family = family;
  report.t_max = t_max;
  report.step_factor = step_factor;
  const auto brackets = scan_zeros(omega, family, 1e-8, t_max, step_factor);
  auto target = [&](double t) { return scan_target(family, omega, t); };
  std::uint32_t rank = 0;
  for (const Bracket& b : brackets) {
    ZeroRecord rec = refine_zero(b, target, abs_tol);
    rec.family = family;
    rec.omega = omega;
    rec.index_n = ++rank;
    report.zeros.push_back(rec);
  }
  report.count_scanned = report.zeros.size();
  report.s_omega_at_t = s_omega(omega, t_max);
  const double main = (t_max / kTwoPi) * std::log(t_max / kTwoPiE);
  const double c = family == Family::A ? (7.0 + 2.0 * omega) / 8.0 : (3.0 + 2.0 * omega) / 8.0;
  report.count_formula = main + report.s_omega_at_t + c;
  return report;
}

// Completeness certificate: scanned count equals the rounded counting formula
// exactly and no gap exceeds ten mean gaps.
inline bool verify_completeness(const ScanReport& report) {
  const long long expected = (long long)std::llround(report.count_formula);
  if ((long long)report.count_scanned != expected) return false;
  const double cap = 5.0 * 4.0 * kPi / std::log(report.t_max / kTwoPi);
  double prev = 0.0;
  for (const ZeroRecord& z : report.zeros) {
    if (z.gamma - prev >= cap && prev > 0.0) return false;
    prev = z.gamma;
  }
  return true;
}

// Strict interlacing 0 < gamma_1(A) < gamma_1(B) < gamma_2(A) < ... over the
// common range.
inline bool interlacing_check(const std::vector<double>& zeros_a,
                              const std::vector<double>& zeros_b) {
  const std::size_t n = std::min(zeros_a.size(), zeros_b.size());
  double prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(prev < zeros_a[i] && zeros_a[i] < zeros_b[i])) return false;
    prev = zeros_b[i];
  }
  // a trailing A zero beyond the last paired B is fine if still increasing
  if (zeros_a.size() > n && !(prev < zeros_a[n])) return false;
  return true;
}

// Diagnostic scale (E1, E2 = E1/log t) for the S_omega increments, following
// the four-case bound table. Purely a reporting scale, never a hard bound.
inline std::pair<double, double> error_envelope(double omega, double t, bool rh_mode) {
  if (!(t >= 16.0)) throw Error("error_envelope: t >= 16");
  const double lt = std::log(t);
  double e1;
  if (omega > 0.5) {
    e1 = 1.0;
  } else if (omega == 0.5) {
    e1 = rh_mode ? std::log(lt) : lt / std::log(lt);
  } else {
    if (!rh_mode)
      throw Error("error_envelope: no unconditional envelope for omega < 1/2");
    e1 = std::pow(lt, 1.0 - 2.0 * omega);
  }
  return {e1, e1 / lt};
}

// ---- zero cache file (CSV) ----
//
//   # xi-spectra zeros v1, family=<A|B>, omega=<decimal>, T=<decimal>, step_factor=<decimal>
//   index,gamma,bracket_lo,bracket_hi,residual
//
// 15 significant digits per field; the B family stores its t = 0 zero with
// index 0. Reload rebuilds a ScanReport without re-scanning.

namespace detail {

inline std::string fmt15(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

}  // namespace detail

inline void write_zero_cache(const ScanReport& report, std::ostream& os) {
  os << "# xi-spectra zeros v1, family=" << family_letter(report.family)
     << ", omega=" << detail::fmt15(report.omega) << ", T=" << detail::fmt15(report.t_max)
     << ", step_factor=" << detail::fmt15(report.step_factor) << "\n";
  os << "index,gamma,bracket_lo,bracket_hi,residual\n";
  if (report.family == Family::B) {
    // the symmetric zero at the origin, forced by xi(1/2+omega) being real
    os << "0,0,0,0,0\n";
  }
  for (const ZeroRecord& z : report.zeros) {
    os << z.index_n << ',' << detail::fmt15(z.gamma) << ',' << detail::fmt15(z.bracket_lo)
       << ',' << detail::fmt15(z.bracket_hi) << ',' << detail::fmt15(z.residual) << "\n";
  }
}

inline void write_zero_cache(const ScanReport& report, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw LoadError("write_zero_cache: cannot open " + path);
  write_zero_cache(report, os);
}

inline ScanReport read_zero_cache(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# xi-spectra zeros v1", 0) != 0)
    throw LoadError("zero cache: bad header");
  ScanReport report;
  auto grab = [&](const std::string& key) -> std::string {
    const auto pos = line.find(key + "=");
    if (pos == std::string::npos) throw LoadError("zero cache: missing " + key);
    auto end = line.find(',', pos);
    return line.substr(pos + key.size() + 1,
                       end == std::string::npos ? std::string::npos : end - pos - key.size() - 1);
  };
  report.family = family_from_letter(grab("family")[0]);
  report.omega = std::stod(grab("omega"));
  report.t_max = std::stod(grab("T"));
  report.step_factor = std::stod(grab("step_factor"));
  if (!std::getline(is, line) || line.rfind("index,", 0) != 0)
    throw LoadError("zero cache: bad column header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string field;
    ZeroRecord z;
    z.family = report.family;
    z.omega = report.omega;
    try {
      std::getline(ss, field, ',');
      z.index_n = (std::uint32_t)std::stoul(field);
      std::getline(ss, field, ',');
      z.gamma = std::stod(field);
      std::getline(ss, field, ',');
      z.bracket_lo = std::stod(field);
      std::getline(ss, field, ',');
      z.bracket_hi = std::stod(field);
      if (!std::getline(ss, field, ',')) throw LoadError("zero cache: short row");
      z.residual = std::stod(field);
    } catch (const std::exception&) {
      throw LoadError("zero cache: malformed row: " + line);
    }
    if (z.index_n == 0) continue;  // B-family origin zero, implicit
    report.zeros.push_back(z);
  }
  report.count_scanned = report.zeros.size();
  report.s_omega_at_t = s_omega(report.omega, report.t_max);
  const double main = (report.t_max / kTwoPi) * std::log(report.t_max / kTwoPiE);
  const double c = report.family == Family::A ? (7.0 + 2.0 * report.omega) / 8.0
                                              : (3.0 + 2.0 * report.omega) / 8.0;
  report.count_formula = main + report.s_omega_at_t + c;
  return report;
}

inline ScanReport read_zero_cache(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw LoadError("read_zero_cache: cannot open " + path);
  return read_zero_cache(is);
}

}  // namespace xispectra
