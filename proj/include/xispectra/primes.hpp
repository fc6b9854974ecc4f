#pragma once

// Prime sieve and the von Mangoldt function. The smallest-prime-factor table
// grows lazily up to 1e7; larger arguments fall back to trial division.

#include <cmath>
#include <cstdint>
#include <vector>

#include "xispectra/errors.hpp"

namespace xispectra {

namespace detail {

class SpfTable {
 public:
  // smallest prime factor of n, growing the table as needed (doubling)
  std::uint32_t spf(std::uint64_t n) {
    if (n >= kMaxSieve) return 0;  // caller handles
    if (n >= table_.size()) grow((std::size_t)n + 1);
    return table_[(std::size_t)n];
  }

  static constexpr std::uint64_t kMaxSieve = 10'000'000;

 private:
  void grow(std::size_t need) {
    std::size_t size = table_.empty() ? 1u << 16 : table_.size();
    while (size < need) size *= 2;
    size = std::min<std::size_t>(size, kMaxSieve);
    table_.assign(size, 0);
    for (std::size_t i = 2; i < size; ++i) {
      if (table_[i] == 0) {
        for (std::size_t j = i; j < size; j += i)
          if (table_[j] == 0) table_[j] = (std::uint32_t)i;
      }
    }
  }

  std::vector<std::uint32_t> table_;
};

inline SpfTable& spf_table() {
  thread_local SpfTable t;
  return t;
}

inline std::uint64_t trial_smallest_factor(std::uint64_t n) {
  if (n % 2 == 0) return 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return d;
  return n;
}

}  // namespace detail

// Primes up to and including `limit`.
inline std::vector<std::uint32_t> primes_up_to(std::uint32_t limit) {
  std::vector<bool> comp(limit + 1, false);
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 2; i <= limit; ++i) {
    if (!comp[i]) {
      out.push_back(i);
      for (std::uint64_t j = (std::uint64_t)i * i; j <= limit; j += i) comp[(std::size_t)j] = true;
    }
  }
  return out;
}

// Lambda(n): log p when n = p^k, else 0.
inline double von_mangoldt(std::uint64_t n) {
  if (n < 1 || n > 100'000'000ull) throw Error("von_mangoldt: n out of range");
  if (n == 1) return 0.0;
  std::uint64_t p;
  if (n < detail::SpfTable::kMaxSieve)
    p = detail::spf_table().spf(n);
  else
    p = detail::trial_smallest_factor(n);
  std::uint64_t m = n;
  while (m % p == 0) m /= p;
  return m == 1 ? std::log((double)p) : 0.0;
}

// Omega(n): number of prime factors with multiplicity.
inline int big_omega(std::uint64_t n) {
  int count = 0;
  while (n > 1) {
    std::uint64_t p = n < detail::SpfTable::kMaxSieve ? detail::spf_table().spf(n)
                                                      : detail::trial_smallest_factor(n);
    while (n % p == 0) {
      n /= p;
      ++count;
    }
  }
  return count;
}

}  // namespace xispectra
