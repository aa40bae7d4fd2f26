#pragma once

// Walk-tree indices: d-dimensional nonnegative vectors ordered by the
// largest differing coordinate. In single-walk trees d = t; multi-walk
// trees append one tree-id coordinate (excluded from the width). The
// parent of an index decrements its first nonzero coordinate and zeroes
// everything before it; P(S) is the union of root paths.

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "common.hpp"

namespace rholab {

struct walk_index {
  std::vector<u32> c;  // c[i] = coordinate i+1

  walk_index() = default;
  explicit walk_index(std::vector<u32> coords) : c(std::move(coords)) {}
  static walk_index zero(u32 dims) { return walk_index(std::vector<u32>(dims, 0)); }

  u32 dims() const { return static_cast<u32>(c.size()); }
  bool is_zero() const {
    return std::all_of(c.begin(), c.end(), [](u32 v) { return v == 0; });
  }
  bool operator==(const walk_index& o) const { return c == o.c; }
  bool operator!=(const walk_index& o) const { return c != o.c; }
};

// Total order: compare at the largest differing coordinate.
inline int index_cmp(const walk_index& a, const walk_index& b) {
  if (a.dims() != b.dims()) throw std::invalid_argument("index_cmp: dimension mismatch");
  for (u32 i = a.dims(); i-- > 0;) {
    if (a.c[i] != b.c[i]) return a.c[i] < b.c[i] ? -1 : 1;
  }
  return 0;
}

struct index_less {
  bool operator()(const walk_index& a, const walk_index& b) const { return index_cmp(a, b) < 0; }
};

// Width: max coordinate; a multi-index ignores its tree-id coordinate.
inline u32 wd(const walk_index& ix, bool multi = false) {
  u32 d = ix.dims() - (multi ? 1 : 0);
  u32 w = 0;
  for (u32 i = 0; i < d; ++i) w = std::max(w, ix.c[i]);
  return w;
}

// Level: position of the first nonzero coordinate; dims+1 when all-zero.
inline u32 level(const walk_index& ix) {
  for (u32 i = 0; i < ix.dims(); ++i) {
    if (ix.c[i] != 0) return i + 1;
  }
  return ix.dims() + 1;
}

struct walk_tree_geom {
  u32 dims = 0;
  bool multi = false;  // last coordinate is a tree id; roots (0..0,i) chain to (0..0,i-1)

  // Parent: zero prefix before the first nonzero coordinate, decrement it.
  std::optional<walk_index> parent(const walk_index& ix) const {
    for (u32 i = 0; i < dims; ++i) {
      if (ix.c[i] != 0) {
        if (multi && i + 1 == dims && ix.c[i] == 1) return std::nullopt;  // first tree root
        walk_index p = ix;
        p.c[i] -= 1;
        return p;
      }
    }
    return std::nullopt;  // root
  }

  std::vector<walk_index> path(walk_index ix) const {
    std::vector<walk_index> out;
    out.push_back(ix);
    while (auto p = parent(out.back())) out.push_back(*p);
    std::reverse(out.begin(), out.end());
    return out;
  }

  std::set<walk_index, index_less> path_set(const std::vector<walk_index>& S) const {
    std::set<walk_index, index_less> out;
    for (const auto& ix : S) {
      if (ix.dims() != dims) throw std::invalid_argument("path_set: dimension mismatch");
      for (auto& p : path(ix)) out.insert(std::move(p));
    }
    return out;
  }

  // Multi-walk trees: the portion of P(S) below the tree roots, i.e.
  // indices whose first t coordinates are not all zero.
  std::set<walk_index, index_less> path_set_sub_root(const std::vector<walk_index>& S) const {
    auto full = path_set(S);
    if (!multi) return full;
    std::set<walk_index, index_less> out;
    for (const auto& ix : full) {
      if (level(ix) <= dims - 1) out.insert(ix);
    }
    return out;
  }
};

}  // namespace rholab
