#pragma once

// kappa-wise independent hash over a prime field: a random polynomial of
// degree kappa-1 evaluated by Horner's rule. level_hash reduces field
// values to [n] ∪ {0} with Pr[0] ~ 1/2 and Pr[v] ~ 1/(2n) per point.

#include <vector>

#include "common.hpp"
#include "tape.hpp"

namespace rholab {

namespace detail {

inline u64 powmod(u64 base, u64 exp, u64 p) {
  u64 r = 1;
  base %= p;
  while (exp) {
    if (exp & 1) r = mulmod(r, base, p);
    base = mulmod(base, base, p);
    exp >>= 1;
  }
  return r;
}

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
inline bool is_prime(u64 x) {
  if (x < 2) return false;
  for (u64 q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (x % q == 0) return x == q;
  }
  u64 d = x - 1;
  int s = 0;
  while ((d & 1) == 0) { d >>= 1; ++s; }
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 v = powmod(a, d, x);
    if (v == 1 || v == x - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      v = mulmod(v, v, x);
      if (v == x - 1) { witness = false; break; }
    }
    if (witness) return false;
  }
  return true;
}

}  // namespace detail

inline u64 smallest_prime_at_least(u64 x) {
  if (x <= 2) return 2;
  if ((x & 1) == 0) ++x;
  while (!detail::is_prime(x)) x += 2;
  return x;
}

struct kwise_seed {
  u32 kappa = 0;
  u64 field_prime = 0;
  std::vector<u64> coeffs;  // kappa field elements, constant term first

  u64 seed_bits() const { return static_cast<u64>(kappa) * ceil_log2(field_prime); }
};

// Draws exactly kappa * ceil_log2(p) tape bits; each coefficient is a
// ceil_log2(p)-bit draw reduced mod p (no rejection, so evaluation stays
// constant-time; the reduction bias is bounded by 2^b mod p / 2^b).
inline kwise_seed sample_kwise(random_tape& tape, u32 kappa, u64 m, u64 range_bound) {
  if (kappa < 1 || m < 1 || range_bound < 1) throw std::invalid_argument("sample_kwise: bad parameters");
  kwise_seed s;
  s.kappa = kappa;
  s.field_prime = smallest_prime_at_least(std::max(m, range_bound));
  unsigned b = ceil_log2(s.field_prime);
  s.coeffs.resize(kappa);
  for (u32 i = 0; i < kappa; ++i) s.coeffs[i] = tape.draw_bits(b) % s.field_prime;
  return s;
}

inline u64 kwise_eval(const kwise_seed& s, u64 x) {
  const u64 p = s.field_prime;
  x %= p;
  if (p <= 0xFFFFFFFFULL) {
    // single-word Horner: acc, x < p < 2^32 so acc*x fits in 64 bits
    u64 acc = 0;
    for (auto it = s.coeffs.rbegin(); it != s.coeffs.rend(); ++it) acc = (acc * x + *it) % p;
    return acc;
  }
  u64 acc = 0;
  for (auto it = s.coeffs.rbegin(); it != s.coeffs.rend(); ++it) acc = addmod(mulmod(acc, x, p), *it, p);
  return acc;
}

// One level of the layered family: [m] -> [n] ∪ {0}.
struct level_hash {
  kwise_seed seed;
  u32 n = 0;
  u64 m = 0;

  // Field value reduced to [2n], then the top half collapses to 0.
  u32 eval(u64 j) const {
    u64 r = kwise_eval(seed, j) % (2ULL * n) + 1;  // in [1, 2n]
    return r <= n ? static_cast<u32>(r) : 0;
  }
};

inline level_hash sample_level(random_tape& tape, u32 n, u64 m, u32 kappa, u64 min_prime = 0) {
  level_hash h;
  h.n = n;
  h.m = m;
  h.seed = sample_kwise(tape, kappa, m, std::max<u64>(2ULL * n, min_prime));
  return h;
}

inline u32 eval_level(const level_hash& h, u64 j) { return h.eval(j); }

}  // namespace rholab
