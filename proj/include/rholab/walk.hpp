#pragma once

// Walk transcripts over the layered hash, organized by hash level.
//
// The standard walk probes levels recursively: a call at level i runs the
// lower levels to quiescence, then tries one level-i move; it halts the
// whole walk when a value is re-probed (the global D set) and ends a
// branch when every remaining level gives zero. The tensor T records the
// vertex written at each tree index, plus probe (the array value whose
// hash produced the entry) and pre (the previously written index).
//
// The S-extended walk drops the halt, caps each call at tau same-level
// moves, and -- only along P(S) -- replaces re-probed hash accesses with a
// fresh one-time random edge. Multi-walk variants run one tree per start
// with shared D sets and a tree-id coordinate appended to the index.

#include <functional>
#include <map>
#include <unordered_set>
#include <vector>

#include "json.hpp"

#include "common.hpp"
#include "hash_family.hpp"
#include "instance.hpp"
#include "tape.hpp"
#include "walk_index.hpp"

namespace rholab {

struct walk_tensor {
  u32 t = 0;         // hash levels
  bool multi = false;
  std::map<walk_index, vertex_t, index_less> entries;
  std::map<walk_index, value_t, index_less> probe;
  std::map<walk_index, walk_index, index_less> pre;

  u32 dims() const { return t + (multi ? 1 : 0); }
  std::vector<vertex_t> vertex_set() const {
    std::vector<vertex_t> v;
    v.reserve(entries.size());
    for (const auto& [ix, x] : entries) v.push_back(x);
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  }

  nlohmann::json dump() const {
    nlohmann::json j;
    j["t"] = t;
    j["multi"] = multi;
    auto& es = j["entries"] = nlohmann::json::array();
    for (const auto& [ix, x] : entries) es.push_back({ix.c, x});
    auto& ps = j["probe"] = nlohmann::json::array();
    for (const auto& [ix, y] : probe) ps.push_back({ix.c, y});
    auto& pr = j["pre"] = nlohmann::json::array();
    for (const auto& [ix, p] : pre) pr.push_back({ix.c, p.c});
    return j;
  }
};

// Internal randomness of extended walks.
struct walk_rng {
  virtual ~walk_rng() = default;
  virtual unsigned bit() = 0;
  virtual u32 uniform(u32 n) = 0;  // in [1, n]
};

struct tape_rng final : walk_rng {
  random_tape tape;
  explicit tape_rng(random_tape t) : tape(t) {}
  unsigned bit() override { return static_cast<unsigned>(tape.draw_bits(1)); }
  u32 uniform(u32 n) override { return tape.draw_vertex(n); }
};

namespace detail_walk {

template <class H>
struct std_ctx {
  const instance& inst;
  const H& hash;
  walk_tensor& T;
  std::unordered_set<value_t> D;
  walk_index last_written;

  std_ctx(const instance& a, const H& h, walk_tensor& tensor) : inst(a), hash(h), T(tensor) {}

  void write_root(const walk_index& root, vertex_t x) {
    T.entries[root] = x;
    last_written = root;
  }

  void write(const walk_index& ell, vertex_t v, value_t probed) {
    T.entries[ell] = v;
    T.probe[ell] = probed;
    T.pre[ell] = last_written;
    last_written = ell;
  }

  // One call = one run of level-i moves; ell passed by value so sibling
  // calls see zeroed lower coordinates.
  vertex_t run(u32 i, vertex_t x, walk_index ell) {
    if (i == 0) return x;
    for (;;) {
      x = run(i - 1, x, ell);
      value_t y = inst.at(x);
      if (D.count(y)) return x;  // h(y) already used: halt the walk
      ell.c[i - 1] += 1;
      u32 v = hash.level_eval(i, y);
      if (v == 0) break;  // defer to the levels above
      D.insert(y);
      write(ell, v, y);
      x = v;
    }
    return x;
  }
};

template <class H>
struct ext_ctx {
  const instance& inst;
  const H& hash;
  walk_tensor& T;
  u32 tau;
  const std::set<walk_index, index_less>& on_path;  // P(S)
  walk_rng& rng;
  std::vector<std::unordered_set<value_t>> D;  // D[i] for level i+1
  walk_index last_written;
  u64 draws = 0;

  ext_ctx(const instance& a, const H& h, walk_tensor& tensor, u32 tau_,
          const std::set<walk_index, index_less>& ps, walk_rng& r)
      : inst(a), hash(h), T(tensor), tau(tau_), on_path(ps), rng(r) {}

  void write_root(const walk_index& root, vertex_t x) {
    T.entries[root] = x;
    last_written = root;
  }

  void write(const walk_index& ell, vertex_t v, value_t probed) {
    T.entries[ell] = v;
    T.probe[ell] = probed;
    T.pre[ell] = last_written;
    last_written = ell;
  }

  vertex_t run(u32 i, vertex_t x, walk_index ell) {
    if (i == 0) return x;
    while (ell.c[i - 1] < tau) {
      x = run(i - 1, x, ell);
      value_t y = inst.at(x);
      ell.c[i - 1] += 1;
      u32 alpha, beta = 0;
      if (on_path.count(ell) && D[i - 1].count(y)) {
        // re-probed along P(S): one-time uniform edge instead of the hash
        ++draws;
        alpha = rng.bit();
        if (alpha) {
          ++draws;
          beta = rng.uniform(hash.n());
        }
      } else {
        u32 v = hash.level_eval(i, y);
        alpha = v != 0;
        beta = v;
      }
      if (alpha == 0) break;
      if (on_path.count(ell)) D[i - 1].insert(y);
      write(ell, beta, y);
      x = beta;
    }
    return x;
  }
};

}  // namespace detail_walk

template <class H>
walk_tensor std_walk(const instance& inst, const H& hash, vertex_t x) {
  walk_tensor T;
  T.t = hash.levels();
  T.multi = false;
  detail_walk::std_ctx<H> ctx{inst, hash, T};
  walk_index root = walk_index::zero(T.t);
  ctx.write_root(root, x);
  ctx.run(T.t, x, root);
  return T;
}

template <class H>
walk_tensor std_multi_walk(const instance& inst, const H& hash,
                           const std::vector<vertex_t>& starts) {
  if (starts.empty()) throw std::invalid_argument("std_multi_walk: no starts");
  walk_tensor T;
  T.t = hash.levels();
  T.multi = true;
  detail_walk::std_ctx<H> ctx{inst, hash, T};
  for (u32 i = 0; i < starts.size(); ++i) {
    walk_index root = walk_index::zero(T.t + 1);
    root.c[T.t] = i + 1;
    ctx.write_root(root, starts[i]);
    ctx.run(T.t, starts[i], root);
  }
  return T;
}

template <class H>
walk_tensor ext_walk(const instance& inst, const H& hash, vertex_t x,
                     const std::vector<walk_index>& S, u32 tau, walk_rng& rng,
                     u64* draws_used = nullptr) {
  walk_tensor T;
  T.t = hash.levels();
  T.multi = false;
  for (const auto& s : S) {
    if (s.dims() != T.t) throw std::invalid_argument("ext_walk: index dimension mismatch");
    if (wd(s) > tau) throw std::invalid_argument("ext_walk: S not tau-bounded");
  }
  walk_tree_geom geom{T.t, false};
  auto PS = geom.path_set(S);
  detail_walk::ext_ctx<H> ctx{inst, hash, T, tau, PS, rng};
  ctx.D.resize(T.t);
  walk_index root = walk_index::zero(T.t);
  ctx.write_root(root, x);
  ctx.run(T.t, x, root);
  if (draws_used) *draws_used = ctx.draws;
  return T;
}

template <class H>
walk_tensor ext_multi_walk(const instance& inst, const H& hash,
                           const std::vector<vertex_t>& starts,
                           const std::vector<walk_index>& S, u32 tau, walk_rng& rng,
                           u64* draws_used = nullptr) {
  if (starts.empty()) throw std::invalid_argument("ext_multi_walk: no starts");
  walk_tensor T;
  T.t = hash.levels();
  T.multi = true;
  for (const auto& s : S) {
    if (s.dims() != T.t + 1) throw std::invalid_argument("ext_multi_walk: index dimension mismatch");
    if (wd(s, true) > tau) throw std::invalid_argument("ext_multi_walk: S not tau-bounded");
  }
  walk_tree_geom geom{T.t + 1, true};
  auto PS = geom.path_set(S);
  detail_walk::ext_ctx<H> ctx{inst, hash, T, tau, PS, rng};
  ctx.D.resize(T.t);
  for (u32 i = 0; i < starts.size(); ++i) {
    walk_index root = walk_index::zero(T.t + 1);
    root.c[T.t] = i + 1;
    ctx.write_root(root, starts[i]);
    ctx.run(T.t, starts[i], root);
  }
  if (draws_used) *draws_used = ctx.draws;
  return T;
}

// Refutations for a transcript relative to max S: type 1 is a pair of
// recorded indices below max S whose array values collide; type 2 is a
// recorded index below max S of full width (a long hike).
struct refutation {
  int type = 0;
  walk_index r1, r2;  // type 2 uses r1 only
};

inline std::vector<refutation> detect_refutations(const instance& inst, const walk_tensor& T,
                                                  const walk_index& max_s, u32 tau) {
  std::vector<refutation> out;
  std::vector<const walk_index*> below;
  for (const auto& [ix, x] : T.entries) {
    if (index_cmp(ix, max_s) < 0) below.push_back(&ix);
  }
  for (std::size_t i = 0; i < below.size(); ++i) {
    for (std::size_t j = i + 1; j < below.size(); ++j) {
      if (inst.at(T.entries.at(*below[i])) == inst.at(T.entries.at(*below[j]))) {
        out.push_back({1, *below[i], *below[j]});
      }
    }
  }
  for (const auto* ix : below) {
    if (wd(*ix, T.multi) >= tau) out.push_back({2, *ix, {}});
  }
  return out;
}

// Exhaustive enumeration of an extended walk's internal randomness: runs
// the walk once per draw sequence, reporting each outcome's probability
// weight. run_walk must consume its draws through the provided walk_rng.
namespace detail_walk {

struct script_rng final : walk_rng {
  std::vector<std::pair<u32, u32>>* stack;  // (value, bound)
  std::size_t pos = 0;
  explicit script_rng(std::vector<std::pair<u32, u32>>* s) : stack(s) {}
  u32 next(u32 bound) {
    if (pos < stack->size()) {
      return (*stack)[pos++].first;
    }
    stack->push_back({0, bound});
    ++pos;
    return 0;
  }
  unsigned bit() override { return next(2); }
  u32 uniform(u32 n) override { return next(n) + 1; }
};

}  // namespace detail_walk

template <class Runner, class Fn>
void exhaust_internal_randomness(Runner&& run_walk, Fn&& fn) {
  std::vector<std::pair<u32, u32>> stack;
  for (;;) {
    detail_walk::script_rng rng(&stack);
    auto tensor = run_walk(rng);
    stack.resize(rng.pos);  // drop draws a shorter run left unconsumed
    double weight = 1.0;
    for (const auto& [v, bound] : stack) weight /= bound;
    fn(tensor, weight, static_cast<u64>(stack.size()));
    while (!stack.empty() && stack.back().first + 1 == stack.back().second) stack.pop_back();
    if (stack.empty()) break;
    stack.back().first += 1;
  }
}

}  // namespace rholab
