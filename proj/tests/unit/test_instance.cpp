#include "doctest.h"

#include <cstdio>
#include <set>
#include <unordered_set>

#include "rholab/graph.hpp"
#include "rholab/instance.hpp"

using namespace rholab;

namespace {

// O(n^2) frequency oracle.
freq_stats brute_freq(const instance& inst) {
  freq_stats s;
  for (vertex_t i = 1; i <= inst.n(); ++i) {
    u64 mult = 0;
    for (vertex_t j = 1; j <= inst.n(); ++j) {
      if (inst.at(i) == inst.at(j)) ++s.f2, ++mult;
    }
    s.finf = std::max(s.finf, mult);
  }
  return s;
}

}  // namespace

TEST_CASE("frequency statistics") {
  instance distinct{100, {4, 9, 23, 57}};
  auto s = compute_freq_stats(distinct);
  CHECK(s.f2 == 4);
  CHECK(s.finf == 1);

  instance triple{10, {7, 7, 7}};
  s = compute_freq_stats(triple);
  CHECK(s.f2 == 9);
  CHECK(s.finf == 3);

  auto tape = random_tape::from_hex("1234");
  instance random_inst;
  random_inst.m = 13;
  for (int i = 0; i < 100; ++i) random_inst.values.push_back(tape.draw_below(13) + 1);
  auto fast = compute_freq_stats(random_inst);
  auto slow = brute_freq(random_inst);
  CHECK(fast.f2 == slow.f2);
  CHECK(fast.finf == slow.finf);
}

TEST_CASE("generators") {
  auto tape = random_tape::from_hex("feed");

  auto d = gen_instance(gen_kind::distinct, 4, 100, tape);
  CHECK(d.a.n() == 4);
  CHECK(is_duplicate_free(d.a));
  for (auto v : d.a.values) CHECK((v >= 1 && v <= 100));

  auto p = gen_instance(gen_kind::planted_pair, 4, 100, tape);
  CHECK(compute_freq_stats(p.a).f2 == 4 + 2);
  REQUIRE(p.planted.size() == 1);
  auto [x, y] = p.planted[0];
  CHECK(x < y);
  CHECK(p.a.at(x) == p.a.at(y));

  auto k3 = gen_instance(gen_kind::planted_k_collisions, 64, 10000, tape, 3);
  CHECK(compute_freq_stats(k3.a).f2 == 64 + 6);
  CHECK(k3.planted.size() == 3);
  std::set<vertex_t> touched;
  for (auto [a, b] : k3.planted) {
    CHECK(k3.a.at(a) == k3.a.at(b));
    CHECK(touched.insert(a).second);
    CHECK(touched.insert(b).second);
  }

  auto si = gen_instance(gen_kind::set_intersection_pair, 8, 100, tape, 3);
  CHECK(is_duplicate_free(si.a));
  CHECK(is_duplicate_free(si.b));
  // sort-join oracle
  std::set<value_t> sa(si.a.values.begin(), si.a.values.end());
  std::vector<value_t> common;
  for (value_t v : si.b.values) {
    if (sa.count(v)) common.push_back(v);
  }
  std::sort(common.begin(), common.end());
  CHECK(common.size() == 3);
  CHECK(common == si.intersection);

  CHECK_THROWS_AS(gen_instance(gen_kind::planted_k_collisions, 5, 100, tape, 3), std::invalid_argument);
  CHECK_THROWS_AS(gen_instance(gen_kind::distinct, 10, 5, tape), std::invalid_argument);
}

TEST_CASE("instance file round trip, text and binary") {
  instance inst{1000, {10, 999, 1, 42, 42}};
  for (const char* path : {"/tmp/rholab_inst_test.txt", "/tmp/rholab_inst_test.bin"}) {
    save_instance(inst, path);
    auto back = load_instance(path);
    CHECK(back.m == inst.m);
    CHECK(back.values == inst.values);
    std::remove(path);
  }
  CHECK_THROWS(load_instance("/tmp/rholab_does_not_exist.txt"));
}

namespace {

// Single-level graph fixture: a_x = x and the table routes value j to
// targets[j-1] (0 = no edge).
struct graph_fixture {
  instance inst;
  table_hash hash;
};

graph_fixture make_graph(u32 n, const std::vector<u32>& targets) {
  graph_fixture g;
  g.inst.m = n;
  for (u32 x = 1; x <= n; ++x) g.inst.values.push_back(x);
  g.hash.n_ = n;
  std::vector<u32> raw(n);
  for (u32 j = 0; j < n; ++j) raw[j] = targets[j] == 0 ? n + 1 : targets[j];
  g.hash.raw = {raw};
  return g;
}

}  // namespace

TEST_CASE("step and reachability oracle on hand graphs") {
  // 1 -> 2 -> 3 -> 2, 4 -> none
  auto g = make_graph(4, {2, 3, 2, 0});
  CHECK(step(g.inst, g.hash, 1) == vertex_t{2});
  CHECK(step(g.inst, g.hash, 3) == vertex_t{2});
  CHECK_FALSE(step(g.inst, g.hash, 4).has_value());

  auto out1 = out_set_oracle(g.inst, g.hash, {1});
  CHECK(out1 == std::vector<vertex_t>{1, 2, 3});
  auto out4 = out_set_oracle(g.inst, g.hash, {4});
  CHECK(out4 == std::vector<vertex_t>{4});
  auto both = out_set_oracle(g.inst, g.hash, {1, 4});
  CHECK(both == std::vector<vertex_t>{1, 2, 3, 4});
}

TEST_CASE("equal array values share their out-edge") {
  instance inst{9, {3, 3}};
  auto tape = random_tape::from_hex("77");
  auto H = sample_layered(tape, 2, 9, 2, 3);
  CHECK(step(inst, H, 1) == step(inst, H, 2));
}

TEST_CASE("out_set_oracle is closed under step and contains the starts") {
  auto tape = random_tape::from_hex("abcdef");
  auto g = gen_instance(gen_kind::planted_pair, 64, 4096, tape);
  for (int rep = 0; rep < 20; ++rep) {
    random_tape tr = tape.fork(rep);
    auto H = sample_layered(tr, 64, 4096, 3, 8);
    std::vector<vertex_t> starts = {tr.draw_vertex(64), tr.draw_vertex(64)};
    auto out = out_set_oracle(g.a, H, starts);
    for (vertex_t s : starts) CHECK(std::binary_search(out.begin(), out.end(), s));
    for (vertex_t v : out) {
      auto nx = step(g.a, H, v);
      if (nx) CHECK(std::binary_search(out.begin(), out.end(), *nx));
    }
  }
}
