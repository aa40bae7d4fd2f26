#pragma once

// The layered hash: t independent biased levels combined by the
// first-nonzero rule. eval_layered maps [m] -> [n] ∪ {-1}; the connected
// variant rewires -1 to 1 and exists only for the c-connecting estimator.
//
// All evaluators are templated on a "level source" providing
//   u32 n() / u32 levels() / u32 level_eval(q, j)   (q is 1-based)
// so the same walk and graph code runs against the kappa-wise family, a
// lazily-filled truly random oracle, or explicit tables.

#include <optional>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "common.hpp"
#include "kwise.hpp"
#include "tape.hpp"

namespace rholab {

struct layered_hash {
  u32 n_ = 0;
  u64 m_ = 0;
  u32 kappa = 0;
  std::vector<level_hash> level_fns;

  u32 n() const { return n_; }
  u64 m() const { return m_; }
  u32 levels() const { return static_cast<u32>(level_fns.size()); }
  u32 level_eval(u32 q, u64 j) const { return level_fns[q - 1].eval(j); }

  u64 seed_bits() const {
    u64 total = 0;
    for (const auto& h : level_fns) total += h.seed.seed_bits();
    return total;
  }
};

struct layered_options {
  // Lower bound on the field prime; raise to shrink the mod-2n reduction
  // bias (e.g. 2n << 20 makes it < 2^-20).
  u64 min_prime = 0;
};

inline layered_hash sample_layered(random_tape& tape, u32 n, u64 m, u32 t, u32 kappa,
                                   layered_options opts = {}) {
  if (t < 1 || kappa < 1 || n < 1 || m < 1) throw std::invalid_argument("sample_layered: bad parameters");
  layered_hash H;
  H.n_ = n;
  H.m_ = m;
  H.kappa = kappa;
  H.level_fns.reserve(t);
  for (u32 q = 0; q < t; ++q) H.level_fns.push_back(sample_level(tape, n, m, kappa, opts.min_prime));
  return H;
}

// Default parameter choices; log n means ceil(log2 n) throughout.
inline u32 default_t_single(u32 n) { return std::max<u32>(1, (ceil_log2(n) + 1) / 2); }
inline u32 default_t_multi(u32 n, u64 k) {
  u64 ratio = std::max<u64>(1, n / std::max<u64>(1, k));
  return std::max<u32>(1, (ceil_log2(ratio) + 1) / 2);
}
inline u32 default_kappa(u32 n) { return std::max<u32>(1, 20 * std::max<u32>(1, ceil_log2(n))); }

// Truly random levels, filled lazily and memoized, for exact-law tests.
struct oracle_hash {
  u32 n_ = 0;
  u64 m_ = 0;
  u32 t_ = 0;
  mutable random_tape rng;
  mutable std::vector<std::unordered_map<u64, u32>> memo;

  oracle_hash(u32 n, u64 m, u32 t, random_tape r) : n_(n), m_(m), t_(t), rng(r), memo(t) {}

  u32 n() const { return n_; }
  u64 m() const { return m_; }
  u32 levels() const { return t_; }
  u32 level_eval(u32 q, u64 j) const {
    auto& tab = memo[q - 1];
    auto it = tab.find(j);
    if (it != tab.end()) return it->second;
    u64 r = rng.draw_below(2ULL * n_) + 1;  // uniform in [1, 2n]
    u32 v = r <= n_ ? static_cast<u32>(r) : 0;
    tab.emplace(j, v);
    return v;
  }
};

// Explicit tables; raw entries in [1, 2n] so enumeration over all tables
// weights the law correctly (values above n read as 0).
struct table_hash {
  u32 n_ = 0;
  std::vector<std::vector<u32>> raw;  // raw[q-1][j-1] in [1, 2n]

  u32 n() const { return n_; }
  u64 m() const { return raw.empty() ? 0 : raw[0].size(); }
  u32 levels() const { return static_cast<u32>(raw.size()); }
  u32 level_eval(u32 q, u64 j) const {
    u32 r = raw[q - 1][j - 1];
    return r <= n_ ? r : 0;
  }
};

template <class H>
i64 eval_layered(const H& hash, u64 j) {
  const u32 t = hash.levels();
  for (u32 q = 1; q <= t; ++q) {
    u32 v = hash.level_eval(q, j);
    if (v != 0) return static_cast<i64>(v);
  }
  return -1;
}

template <class H>
u32 eval_layered_connected(const H& hash, u64 j) {
  i64 v = eval_layered(hash, j);
  return v < 0 ? 1u : static_cast<u32>(v);
}

struct level_trace_result {
  std::optional<u32> q;  // firing level, 1-based
  i64 value;             // h_q(j), or -1 when no level fired
};

template <class H>
level_trace_result level_trace(const H& hash, u64 j) {
  const u32 t = hash.levels();
  for (u32 q = 1; q <= t; ++q) {
    u32 v = hash.level_eval(q, j);
    if (v != 0) return {q, static_cast<i64>(v)};
  }
  return {std::nullopt, -1};
}

// JSON round-trip for experiment reproducibility. Coefficients travel as
// decimal strings so 64-bit values survive any JSON reader.
inline nlohmann::json layered_to_json(const layered_hash& H) {
  nlohmann::json j;
  j["n"] = H.n_;
  j["m"] = H.m_;
  j["t"] = H.levels();
  j["kappa"] = H.kappa;
  auto& lv = j["levels"] = nlohmann::json::array();
  for (const auto& h : H.level_fns) {
    nlohmann::json e;
    e["prime"] = std::to_string(h.seed.field_prime);
    auto& cs = e["coeffs"] = nlohmann::json::array();
    for (u64 c : h.seed.coeffs) cs.push_back(std::to_string(c));
    lv.push_back(std::move(e));
  }
  return j;
}

inline layered_hash layered_from_json(const nlohmann::json& j) {
  layered_hash H;
  H.n_ = j.at("n").get<u32>();
  H.m_ = j.at("m").get<u64>();
  H.kappa = j.at("kappa").get<u32>();
  for (const auto& e : j.at("levels")) {
    level_hash h;
    h.n = H.n_;
    h.m = H.m_;
    h.seed.field_prime = std::stoull(e.at("prime").get<std::string>());
    for (const auto& c : e.at("coeffs")) h.seed.coeffs.push_back(std::stoull(c.get<std::string>()));
    h.seed.kappa = static_cast<u32>(h.seed.coeffs.size());
    H.level_fns.push_back(std::move(h));
  }
  if (j.at("t").get<u32>() != H.levels()) throw std::invalid_argument("layered_from_json: level count mismatch");
  return H;
}

}  // namespace rholab
