#pragma once

// Exact walk-tree combinatorics over tau-bounded indices, as rationals:
//   f(c, t)            = sum over c-subsets S of 2^(1 - |P(S)|)
//   tuple sums         = the same over ordered c-tuples, and over
//                        nondecreasing tuples containing an equality
//   geometric identity = partial sums of 2^(-k) * C(k, r)
// Path unions are evaluated as bitmasks over the (tau+1)^t index cube.

#include <boost/multiprecision/cpp_int.hpp>

#include <bit>
#include <limits>
#include <vector>

#include "common.hpp"
#include "walk_index.hpp"

namespace rholab {

using rational = boost::multiprecision::cpp_rational;
using bigint = boost::multiprecision::cpp_int;

inline rational pow2_rational(i64 e) {
  bigint num = 1, den = 1;
  if (e >= 0) num <<= static_cast<unsigned>(e);
  else den <<= static_cast<unsigned>(-e);
  return rational(num, den);
}

namespace detail_exact {

struct index_cube {
  u32 t, tau;
  u64 count;                         // (tau+1)^t
  std::vector<std::vector<u64>> path_mask;  // per index, bitmask of its root path
  std::vector<u32> path_len;
  u32 mask_words;

  index_cube(u32 t_, u32 tau_) : t(t_), tau(tau_) {
    count = 1;
    for (u32 i = 0; i < t; ++i) {
      count *= (tau + 1);
      if (count > (1ULL << 40)) throw std::invalid_argument("index cube too large");
    }
    mask_words = static_cast<u32>((count + 63) / 64);
    path_mask.resize(count);
    path_len.resize(count);
    walk_tree_geom geom{t, false};
    std::vector<u32> coords(t, 0);
    for (u64 r = 0; r < count; ++r) {
      walk_index ix{coords};
      std::vector<u64> mask(mask_words, 0);
      u32 len = 0;
      for (const auto& p : geom.path(ix)) {
        u64 rank = rank_of(p);
        mask[rank / 64] |= 1ULL << (rank % 64);
        ++len;
      }
      path_mask[r] = std::move(mask);
      path_len[r] = len;
      // odometer over coordinates
      for (u32 i = 0; i < t; ++i) {
        if (++coords[i] <= tau) break;
        coords[i] = 0;
      }
    }
  }

  u64 rank_of(const walk_index& ix) const {
    u64 r = 0;
    for (u32 i = ix.dims(); i-- > 0;) r = r * (tau + 1) + ix.c[i];
    return r;
  }

  u32 union_path_len(const std::vector<u64>& ranks) const {
    std::vector<u64> acc(mask_words, 0);
    for (u64 r : ranks) {
      for (u32 w = 0; w < mask_words; ++w) acc[w] |= path_mask[r][w];
    }
    u32 bits = 0;
    for (u64 w : acc) bits += static_cast<u32>(std::popcount(w));
    return bits;
  }
};

inline u64 binom(u64 n, u64 k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  bigint r = 1;
  for (u64 i = 0; i < k; ++i) {
    r *= (n - i);
    r /= (i + 1);
  }
  if (r > std::numeric_limits<u64>::max()) throw std::overflow_error("binom overflow");
  return static_cast<u64>(r);
}

}  // namespace detail_exact

// Exact f(c, t) over the tau-bounded cube. Feasibility guard: C((tau+1)^t, c)
// enumerated subsets must stay within ~1e7.
inline rational enum_f(u32 c, u32 t, u32 tau, u64 max_subsets = 10'000'000) {
  if (c < 1 || t < 1) throw std::invalid_argument("enum_f: need c, t >= 1");
  detail_exact::index_cube cube(t, tau);
  if (cube.count < c) return 0;
  if (detail_exact::binom(cube.count, c) > max_subsets) throw std::invalid_argument("enum_f: enumeration too large");
  rational total = 0;
  std::vector<u64> pick(c);
  for (u32 i = 0; i < c; ++i) pick[i] = i;
  for (;;) {
    total += pow2_rational(1 - static_cast<i64>(cube.union_path_len(pick)));
    i64 i = static_cast<i64>(c) - 1;
    while (i >= 0 && pick[i] == cube.count - c + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (u32 j = static_cast<u32>(i) + 1; j < c; ++j) pick[j] = pick[j - 1] + 1;
  }
  return total;
}

struct corollary_sums {
  rational ordered_tuples;      // sum over all c-tuples of 2^(1-|P|)
  rational nondistinct_tuples;  // nondecreasing tuples containing an equality
};

// Rank order coincides with index order (ranks are the mixed-radix reading
// of the coordinates, most significant last), so tuple monotonicity and
// equality can be checked on ranks directly.
inline corollary_sums enum_corollaries(u32 c, u32 t, u32 tau, u64 max_tuples = 50'000'000) {
  if (c < 1 || t < 1) throw std::invalid_argument("enum_corollaries: need c, t >= 1");
  detail_exact::index_cube cube(t, tau);
  u64 tuples = 1;
  for (u32 i = 0; i < c; ++i) {
    tuples *= cube.count;
    if (tuples > max_tuples) throw std::invalid_argument("enum_corollaries: enumeration too large");
  }
  corollary_sums out;
  std::vector<u64> pick(c, 0);
  for (u64 iter = 0; iter < tuples; ++iter) {
    rational term = pow2_rational(1 - static_cast<i64>(cube.union_path_len(pick)));
    out.ordered_tuples += term;
    if (c >= 2) {
      bool nondecreasing = true, has_equal = false;
      for (u32 i = 0; i + 1 < c; ++i) {
        if (pick[i] > pick[i + 1]) { nondecreasing = false; break; }
        if (pick[i] == pick[i + 1]) has_equal = true;
      }
      if (nondecreasing && has_equal) out.nondistinct_tuples += term;
    }
    for (u32 i = 0; i < c; ++i) {
      if (++pick[i] < cube.count) break;
      pick[i] = 0;
    }
  }
  return out;
}

// Partial sum of 2^(-k) * C(k, r) for k = 0..K; converges to 2 from below.
inline rational geom_identity_partial(u32 r, u32 K) {
  if (K < r) throw std::invalid_argument("geom_identity_partial: need K >= r");
  rational total = 0;
  for (u32 k = r; k <= K; ++k) {
    bigint ck = 1;
    for (u64 i = 0; i < r; ++i) {
      ck *= (k - i);
      ck /= (i + 1);
    }
    total += rational(ck, bigint(1) << k);
  }
  return total;
}

}  // namespace rholab
