#pragma once

// Input arrays a ∈ [m]^n, frequency statistics, instance generators and
// the on-disk formats (text: "n m" header then one value per line;
// binary .bin: little-endian u64 n, m, then n values).

#include <algorithm>
#include <fstream>
#include <numeric>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "common.hpp"
#include "tape.hpp"

namespace rholab {

struct instance {
  u64 m = 0;
  std::vector<value_t> values;  // values[x-1] = a_x, each in [1, m]

  u32 n() const { return static_cast<u32>(values.size()); }
  value_t at(vertex_t x) const { return values[x - 1]; }
};

struct freq_stats {
  u64 f2 = 0;    // sum over (i, j) of [a_i == a_j]
  u64 finf = 0;  // multiplicity of the most frequent value
};

inline freq_stats compute_freq_stats(const instance& inst) {
  std::unordered_map<value_t, u64> count;
  count.reserve(inst.values.size() * 2);
  for (value_t v : inst.values) ++count[v];
  freq_stats s;
  for (const auto& [v, c] : count) {
    s.f2 += c * c;
    s.finf = std::max(s.finf, c);
  }
  return s;
}

inline bool is_duplicate_free(const instance& inst) {
  std::unordered_set<value_t> seen;
  seen.reserve(inst.values.size() * 2);
  for (value_t v : inst.values) {
    if (!seen.insert(v).second) return false;
  }
  return true;
}

namespace detail {

// Injective counter -> [1, m] map: x -> 1 + (a*x + b) mod m with
// gcd(a, m) = 1, so generated values are distinct by construction.
struct affine_perm {
  u64 a, b, m;
  static affine_perm sample(random_tape& tape, u64 m) {
    u64 a;
    do {
      a = tape.draw_below(m - 1) + 1;
    } while (std::gcd(a, m) != 1);
    u64 b = tape.draw_below(m);
    return {a, b, m};
  }
  value_t operator()(u64 i) const { return addmod(mulmod(a, i % m, m), b, m) + 1; }
};

inline void shuffle_values(std::vector<value_t>& v, random_tape& tape) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = tape.draw_below(i);
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace detail

enum class gen_kind { distinct, planted_pair, planted_k_collisions, set_intersection_pair };

struct gen_result {
  instance a;
  instance b;                                            // set_intersection_pair only
  std::vector<std::pair<vertex_t, vertex_t>> planted;    // colliding position pairs in a
  std::vector<value_t> intersection;                     // planted common values, sorted
};

// k: number of planted pairs, or the intersection size for
// set_intersection_pair. Values come from a random affine permutation of
// [m], so distinctness is certain rather than high-probability.
inline gen_result gen_instance(gen_kind kind, u32 n, u64 m, random_tape& tape, u64 k = 0) {
  if (n < 1 || m < n) throw std::invalid_argument("gen_instance: need m >= n >= 1");
  gen_result out;
  auto perm = detail::affine_perm::sample(tape, m);
  switch (kind) {
    case gen_kind::distinct: {
      out.a.m = m;
      out.a.values.resize(n);
      for (u32 i = 0; i < n; ++i) out.a.values[i] = perm(i);
      detail::shuffle_values(out.a.values, tape);
      break;
    }
    case gen_kind::planted_pair:
      k = 1;
      [[fallthrough]];
    case gen_kind::planted_k_collisions: {
      if (k < 1 || 2 * k > n) throw std::invalid_argument("gen_instance: need 1 <= 2k <= n");
      out.a.m = m;
      out.a.values.resize(n);
      // n-k distinct values; the first k of them appear twice
      for (u32 i = 0; i < n - k; ++i) out.a.values[i] = perm(i);
      for (u32 i = 0; i < k; ++i) out.a.values[n - k + i] = out.a.values[i];
      // random positions via a permutation of [1, n]
      std::vector<vertex_t> pos(n);
      std::iota(pos.begin(), pos.end(), 1);
      for (std::size_t i = n; i > 1; --i) std::swap(pos[i - 1], pos[tape.draw_below(i)]);
      std::vector<value_t> placed(n);
      for (u32 i = 0; i < n; ++i) placed[pos[i] - 1] = out.a.values[i];
      out.a.values = std::move(placed);
      for (u32 i = 0; i < k; ++i) {
        vertex_t p = pos[i], q = pos[n - k + i];
        out.planted.emplace_back(std::min(p, q), std::max(p, q));
      }
      break;
    }
    case gen_kind::set_intersection_pair: {
      if (2 * n < k || m < 2ULL * n - k) throw std::invalid_argument("gen_instance: need m >= 2n - k and k <= n");
      out.a.m = m;
      out.b.m = m;
      out.a.values.resize(n);
      out.b.values.resize(n);
      for (u32 i = 0; i < n; ++i) out.a.values[i] = perm(i);
      for (u64 i = 0; i < k; ++i) out.b.values[i] = perm(i);
      for (u32 i = static_cast<u32>(k); i < n; ++i) out.b.values[i] = perm(n + i - k);
      for (u64 i = 0; i < k; ++i) out.intersection.push_back(perm(i));
      std::sort(out.intersection.begin(), out.intersection.end());
      detail::shuffle_values(out.a.values, tape);
      detail::shuffle_values(out.b.values, tape);
      break;
    }
  }
  return out;
}

inline instance concat_instances(const instance& a, const instance& b) {
  instance c;
  c.m = std::max(a.m, b.m);
  c.values = a.values;
  c.values.insert(c.values.end(), b.values.begin(), b.values.end());
  return c;
}

inline void save_instance(const instance& inst, const std::string& path) {
  bool binary = path.size() >= 4 && path.compare(path.size() - 4, 4, ".bin") == 0;
  std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
  if (!f) throw std::runtime_error("cannot open " + path);
  if (binary) {
    auto put = [&](u64 v) {
      unsigned char b[8];
      for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
      f.write(reinterpret_cast<const char*>(b), 8);
    };
    put(inst.n());
    put(inst.m);
    for (value_t v : inst.values) put(v);
  } else {
    f << inst.n() << ' ' << inst.m << '\n';
    for (value_t v : inst.values) f << v << '\n';
  }
  if (!f) throw std::runtime_error("write failed: " + path);
}

inline instance load_instance(const std::string& path) {
  bool binary = path.size() >= 4 && path.compare(path.size() - 4, 4, ".bin") == 0;
  std::ifstream f(path, binary ? std::ios::binary : std::ios::in);
  if (!f) throw std::runtime_error("cannot open " + path);
  instance inst;
  u64 n = 0;
  if (binary) {
    auto get = [&]() -> u64 {
      unsigned char b[8];
      f.read(reinterpret_cast<char*>(b), 8);
      u64 v = 0;
      for (int i = 0; i < 8; ++i) v |= static_cast<u64>(b[i]) << (8 * i);
      return v;
    };
    n = get();
    inst.m = get();
    inst.values.resize(n);
    for (u64 i = 0; i < n; ++i) inst.values[i] = get();
    if (!f) throw std::runtime_error("truncated instance file: " + path);
  } else {
    if (!(f >> n >> inst.m)) throw std::runtime_error("bad instance header: " + path);
    inst.values.resize(n);
    for (u64 i = 0; i < n; ++i) {
      if (!(f >> inst.values[i])) throw std::runtime_error("truncated instance file: " + path);
    }
  }
  for (value_t v : inst.values) {
    if (v < 1 || v > inst.m) throw std::runtime_error("instance value out of range in " + path);
  }
  return inst;
}

}  // namespace rholab
