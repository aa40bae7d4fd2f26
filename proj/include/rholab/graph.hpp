#pragma once

// The functional graph G on [n]: vertex x steps to eval_layered(a_x), or
// nowhere when every level is zero. out_set_oracle is the exact
// reachability reference used by tests and estimators; it spends O(n)
// memory freely and must never be called from the low-space side.

#include <algorithm>
#include <optional>
#include <unordered_set>
#include <vector>

#include "common.hpp"
#include "hash_family.hpp"
#include "instance.hpp"
#include "meter.hpp"

namespace rholab {

template <class H>
std::optional<vertex_t> step(const instance& inst, const H& hash, vertex_t x) {
  i64 v = eval_layered(hash, inst.at(x));
  if (v < 0) return std::nullopt;
  return static_cast<vertex_t>(v);
}

// Variant used only by the c-connecting estimator: -1 rewired to vertex 1,
// so every vertex has an out-edge.
template <class H>
vertex_t step_connected(const instance& inst, const H& hash, vertex_t x) {
  return eval_layered_connected(hash, inst.at(x));
}

template <class H>
std::optional<vertex_t> step_metered(const instance& inst, const H& hash, vertex_t x,
                                     resource_meter* meter) {
  if (meter) meter->count_call();
  return step(inst, hash, x);
}

// Exact Out(A): iterated stepping with a visited set.
template <class H>
std::vector<vertex_t> out_set_oracle(const instance& inst, const H& hash,
                                     const std::vector<vertex_t>& starts) {
  std::unordered_set<vertex_t> seen;
  seen.reserve(64);
  for (vertex_t s : starts) {
    vertex_t x = s;
    while (seen.insert(x).second) {
      auto nx = step(inst, hash, x);
      if (!nx) break;
      x = *nx;
    }
  }
  std::vector<vertex_t> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

template <class H>
std::vector<vertex_t> out_set_oracle_connected(const instance& inst, const H& hash,
                                               const std::vector<vertex_t>& starts) {
  std::unordered_set<vertex_t> seen;
  seen.reserve(64);
  for (vertex_t s : starts) {
    vertex_t x = s;
    while (seen.insert(x).second) x = step_connected(inst, hash, x);
  }
  std::vector<vertex_t> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace rholab
