#pragma once

// COLLIDE(A): report every (value y, {u in Out(A) : a_u = y}) group with
// at least two members, touching O(|A|) words of state and Õ(|Out(A)|)
// f-evaluations. No global visited set.
//
// Shape of the solution: every walk either closes a cycle or dies at a
// vertex whose value hashes to -1. Equal array values force equal
// successors, so collision-group members are either (a) two predecessors
// of a walk's own cycle entry, (b) predecessors of the first common vertex
// of two walks, or (c) terminal vertices of dead walks. (a) comes from a
// Brent summary per start, (b) from a lockstep sweep that walks all
// same-class pointers down equal remaining distance to a canonical vertex
// (cycle minimum, or the shared death vertex), (c) from the summaries
// directly. Candidate vertices are then bucketed by array value; any
// bucket with two distinct positions is a genuine group.

#include <algorithm>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "common.hpp"
#include "graph.hpp"
#include "instance.hpp"
#include "meter.hpp"

namespace rholab {

struct walk_summary {
  vertex_t start = 0;
  u64 tail_length = 0;                  // mu; for dead walks, the whole path length
  std::optional<u64> cycle_length;      // lambda
  std::optional<vertex_t> entry;        // first vertex on the cycle
  vertex_t last = 0;                    // terminal vertex of a dead walk, else the entry
  u64 steps_taken = 0;
  bool truncated = false;
};

struct collision_group {
  value_t y = 0;
  std::vector<vertex_t> positions;  // sorted, all with a_u == y
};

struct collision_report {
  std::vector<collision_group> groups;  // sorted by value
  bool complete = true;                 // false when a step cap or word budget tripped
  bool over_budget = false;             // word budget exceeded (report still full)
};

struct collide_options {
  u64 step_cap_factor = 64;  // per-walk cap = factor * n
  u64 word_budget = 0;       // 0 = measure only; otherwise flag when exceeded
};

namespace detail_collide {

template <class H>
std::optional<vertex_t> advance(const instance& inst, const H& hash, vertex_t x, u64 steps,
                                resource_meter* meter) {
  for (u64 i = 0; i < steps; ++i) {
    auto nx = step_metered(inst, hash, x, meter);
    if (!nx) return std::nullopt;
    x = *nx;
  }
  return x;
}

}  // namespace detail_collide

// Brent's cycle finding with O(1) words: (lambda, mu, entry) or a dead-walk
// summary when the path hits a -1 value first.
template <class H>
walk_summary brent_summary(const instance& inst, const H& hash, vertex_t start, u64 step_cap,
                           resource_meter* meter = nullptr) {
  walk_summary s;
  s.start = start;
  u64 calls0 = meter ? meter->oracle_calls : 0;
  auto finish = [&](walk_summary& w) {
    if (meter) w.steps_taken = meter->oracle_calls - calls0;
    return w;
  };

  auto first = step_metered(inst, hash, start, meter);
  if (!first) {
    s.tail_length = 0;
    s.last = start;
    return finish(s);
  }
  u64 power = 1, lam = 1;
  vertex_t tortoise = start;
  vertex_t hare = *first;
  u64 hare_dist = 1;
  while (tortoise != hare) {
    if (power == lam) {
      tortoise = hare;
      power *= 2;
      lam = 0;
    }
    auto nx = step_metered(inst, hash, hare, meter);
    if (!nx) {
      s.tail_length = hare_dist;
      s.last = hare;
      return finish(s);
    }
    hare = *nx;
    ++hare_dist;
    ++lam;
    if (hare_dist > step_cap) {
      s.tail_length = hare_dist;
      s.last = hare;
      s.truncated = true;
      return finish(s);
    }
  }
  s.cycle_length = lam;

  // mu phase: run a second pointer lambda steps ahead, then walk both.
  vertex_t ahead = *detail_collide::advance(inst, hash, start, lam, meter);
  vertex_t base = start;
  u64 mu = 0;
  while (base != ahead) {
    base = *step_metered(inst, hash, base, meter);
    ahead = *step_metered(inst, hash, ahead, meter);
    ++mu;
  }
  s.tail_length = mu;
  s.entry = base;
  s.last = base;
  return finish(s);
}

namespace detail_collide {

// Canonical cycle representative (minimum vertex) plus the distance from
// the entry to it, in lambda extra steps.
template <class H>
std::pair<vertex_t, u64> cycle_representative(const instance& inst, const H& hash, vertex_t entry,
                                              u64 lambda, resource_meter* meter) {
  vertex_t best = entry;
  u64 best_dist = 0;
  vertex_t x = entry;
  for (u64 i = 1; i < lambda; ++i) {
    x = *step_metered(inst, hash, x, meter);
    if (x < best) {
      best = x;
      best_dist = i;
    }
  }
  return {best, best_dist};
}

}  // namespace detail_collide

// First common vertex of two walks over the same graph: returns the two
// distinct predecessors at the merge frontier, or nullopt when the walks
// never intersect or one start lies on the other's path.
template <class H>
std::optional<std::pair<vertex_t, vertex_t>> merge_point(const instance& inst, const H& hash,
                                                         const walk_summary& s1,
                                                         const walk_summary& s2,
                                                         resource_meter* meter = nullptr) {
  if (s1.start == s2.start) return std::nullopt;
  if (s1.truncated || s2.truncated) return std::nullopt;
  u64 d1, d2;
  if (s1.cycle_length && s2.cycle_length) {
    auto [rep1, off1] = detail_collide::cycle_representative(inst, hash, *s1.entry, *s1.cycle_length, meter);
    auto [rep2, off2] = detail_collide::cycle_representative(inst, hash, *s2.entry, *s2.cycle_length, meter);
    if (rep1 != rep2) return std::nullopt;
    d1 = s1.tail_length + off1;
    d2 = s2.tail_length + off2;
  } else if (!s1.cycle_length && !s2.cycle_length) {
    if (s1.last != s2.last) return std::nullopt;
    d1 = s1.tail_length;
    d2 = s2.tail_length;
  } else {
    return std::nullopt;  // one dies, one cycles: disjoint futures
  }
  vertex_t p1 = s1.start, p2 = s2.start;
  std::optional<vertex_t> prev1, prev2;
  while (d1 > d2) { prev1 = p1; p1 = *step_metered(inst, hash, p1, meter); --d1; }
  while (d2 > d1) { prev2 = p2; p2 = *step_metered(inst, hash, p2, meter); --d2; }
  while (p1 != p2) {
    prev1 = p1;
    prev2 = p2;
    p1 = *step_metered(inst, hash, p1, meter);
    p2 = *step_metered(inst, hash, p2, meter);
  }
  if (!prev1 || !prev2) return std::nullopt;  // merged at one of the starts
  return std::make_pair(*prev1, *prev2);
}

template <class H>
collision_report collide(const instance& inst, const H& hash, std::vector<vertex_t> starts,
                         resource_meter& meter, collide_options opts = {}) {
  if (starts.empty()) throw std::invalid_argument("collide: empty start set");
  collision_report report;
  const u64 step_cap = opts.step_cap_factor * inst.n();

  std::sort(starts.begin(), starts.end());
  starts.erase(std::unique(starts.begin(), starts.end()), starts.end());
  const u64 g = starts.size();
  scoped_words w_starts(meter, g);

  struct walk_info {
    walk_summary sum;
    vertex_t canon = 0;  // cycle representative or death vertex
    u64 dist = 0;        // remaining distance from start to canon
    bool cycled = false;
  };
  std::vector<walk_info> walks(g);
  scoped_words w_walks(meter, 12 * g);

  std::vector<vertex_t> candidates;  // collision candidate vertices
  candidates.reserve(2 * g);
  auto push_candidate = [&](vertex_t v) {
    candidates.push_back(v);
    meter.charge(1);
  };

  for (u64 i = 0; i < g; ++i) {
    walk_info& w = walks[i];
    w.sum = brent_summary(inst, hash, starts[i], step_cap, &meter);
    if (w.sum.truncated) {
      report.complete = false;
      continue;
    }
    if (w.sum.cycle_length) {
      w.cycled = true;
      u64 lam = *w.sum.cycle_length;
      auto [rep, off] = detail_collide::cycle_representative(inst, hash, *w.sum.entry, lam, &meter);
      w.canon = rep;
      w.dist = w.sum.tail_length + off;
      if (w.sum.tail_length >= 1) {
        // the cycle entry has two predecessors: last tail vertex, last cycle vertex
        vertex_t tail_last = *detail_collide::advance(inst, hash, starts[i], w.sum.tail_length - 1, &meter);
        vertex_t cyc_last = *detail_collide::advance(inst, hash, *w.sum.entry, lam - 1, &meter);
        push_candidate(tail_last);
        push_candidate(cyc_last);
      }
    } else {
      w.canon = w.sum.last;
      w.dist = w.sum.tail_length;
      push_candidate(w.sum.last);  // dead ends collide by value alone
    }
  }

  // Group same-fate walks and sweep them toward the canonical vertex in
  // lockstep of remaining distance; the first coincidence of two pointers
  // is their first common vertex, and its predecessors are candidates.
  {
    std::vector<u64> order;
    order.reserve(g);
    for (u64 i = 0; i < g; ++i) {
      if (!walks[i].sum.truncated) order.push_back(i);
    }
    std::sort(order.begin(), order.end(), [&](u64 a, u64 b) {
      if (walks[a].cycled != walks[b].cycled) return walks[a].cycled < walks[b].cycled;
      if (walks[a].canon != walks[b].canon) return walks[a].canon < walks[b].canon;
      return walks[a].dist > walks[b].dist;
    });
    scoped_words w_order(meter, g);

    u64 lo = 0;
    while (lo < order.size()) {
      u64 hi = lo + 1;
      while (hi < order.size() && walks[order[hi]].cycled == walks[order[lo]].cycled &&
             walks[order[hi]].canon == walks[order[lo]].canon)
        ++hi;
      u64 members = hi - lo;
      if (members >= 2) {
        struct pointer {
          vertex_t cur = 0;
          std::optional<vertex_t> prev;
          bool live = false;
        };
        std::vector<pointer> ptrs(members);
        std::unordered_map<vertex_t, u64> occupied;  // vertex -> pointer slot
        occupied.reserve(members * 2);
        scoped_words w_sweep(meter, 5 * members);

        u64 next_in = 0;  // members enter in decreasing dist order
        for (u64 tier = walks[order[lo]].dist;; --tier) {
          while (next_in < members && walks[order[lo + next_in]].dist == tier) {
            u64 slot = next_in++;
            ptrs[slot] = {walks[order[lo + slot]].sum.start, std::nullopt, true};
            auto [it, fresh] = occupied.try_emplace(ptrs[slot].cur, slot);
            if (!fresh) ptrs[slot].live = false;  // start lies on another path: subsumed
          }
          if (tier == 0) break;
          // step every live pointer once, then re-derive occupancy
          occupied.clear();
          for (u64 s = 0; s < members; ++s) {
            if (!ptrs[s].live) continue;
            ptrs[s].prev = ptrs[s].cur;
            ptrs[s].cur = *step_metered(inst, hash, ptrs[s].cur, &meter);
            auto [it, fresh] = occupied.try_emplace(ptrs[s].cur, s);
            if (!fresh) {
              // first common vertex of the two walks: both predecessors
              u64 other = it->second;
              if (ptrs[other].prev) push_candidate(*ptrs[other].prev);
              if (ptrs[s].prev) push_candidate(*ptrs[s].prev);
              ptrs[s].live = false;
            }
          }
        }
      }
      lo = hi;
    }
  }

  // Bucket candidates by array value; two distinct positions sharing a
  // value is exactly a collision group.
  {
    std::map<value_t, std::vector<vertex_t>> buckets;
    scoped_words w_buckets(meter, 3 * std::max<u64>(1, candidates.size()));
    for (vertex_t v : candidates) buckets[inst.at(v)].push_back(v);
    for (auto& [y, pos] : buckets) {
      std::sort(pos.begin(), pos.end());
      pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
      if (pos.size() >= 2) {
        meter.charge(1 + pos.size());
        report.groups.push_back({y, pos});
      }
    }
  }
  meter.release(candidates.size());
  for (const auto& grp : report.groups) meter.release(1 + grp.positions.size());

  if (opts.word_budget && meter.peak_words > opts.word_budget) {
    report.over_budget = true;
    report.complete = false;
  }
  return report;
}

}  // namespace rholab
