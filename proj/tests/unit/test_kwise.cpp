#include "doctest.h"

#include <map>
#include <vector>

#include "rholab/kwise.hpp"

using namespace rholab;

TEST_CASE("prime search") {
  CHECK(smallest_prime_at_least(0) == 2);
  CHECK(smallest_prime_at_least(2) == 2);
  CHECK(smallest_prime_at_least(8) == 11);
  CHECK(smallest_prime_at_least(17) == 17);
  CHECK(smallest_prime_at_least(18) == 19);
  CHECK(smallest_prime_at_least(1ULL << 32) == 4294967311ULL);
}

TEST_CASE("degree-0 polynomial is a constant function") {
  auto tape = random_tape::from_hex("01");
  auto s = sample_kwise(tape, 1, 8, 8);
  CHECK(s.coeffs.size() == 1);
  u64 v = kwise_eval(s, 1);
  for (u64 x = 2; x <= 8; ++x) CHECK(kwise_eval(s, x) == v);
}

TEST_CASE("sampling is deterministic and consumes exactly kappa*ceil(log2 p) bits") {
  auto t1 = random_tape::from_hex("beef");
  auto t2 = random_tape::from_hex("beef");
  auto s1 = sample_kwise(t1, 5, 100, 64);
  auto s2 = sample_kwise(t2, 5, 100, 64);
  CHECK(s1.coeffs == s2.coeffs);
  CHECK(s1.field_prime == 101);
  CHECK(s1.seed_bits() == 5 * ceil_log2(101));
  CHECK(t1.position() == s1.seed_bits());
}

// Pairwise independence, exhaustively: over all p^2 seeds, every pair of
// field outputs at two fixed distinct points is hit exactly once.
TEST_CASE("exhaustive seed enumeration hits every output pair once") {
  const u64 p = 11;  // smallest prime >= max(8, 8)
  for (auto [x1, x2] : std::vector<std::pair<u64, u64>>{{1, 2}, {3, 8}, {2, 7}}) {
    std::map<std::pair<u64, u64>, int> counts;
    kwise_seed s;
    s.kappa = 2;
    s.field_prime = p;
    for (u64 c0 = 0; c0 < p; ++c0) {
      for (u64 c1 = 0; c1 < p; ++c1) {
        s.coeffs = {c0, c1};
        ++counts[{kwise_eval(s, x1), kwise_eval(s, x2)}];
      }
    }
    CHECK(counts.size() == p * p);
    for (const auto& [k, c] : counts) CHECK(c == 1);
  }
}

TEST_CASE("three-wise, small field: every output triple hit exactly once") {
  const u64 p = 5;
  std::map<std::tuple<u64, u64, u64>, int> counts;
  kwise_seed s;
  s.kappa = 3;
  s.field_prime = p;
  for (u64 c0 = 0; c0 < p; ++c0)
    for (u64 c1 = 0; c1 < p; ++c1)
      for (u64 c2 = 0; c2 < p; ++c2) {
        s.coeffs = {c0, c1, c2};
        ++counts[{kwise_eval(s, 0), kwise_eval(s, 1), kwise_eval(s, 4)}];
      }
  CHECK(counts.size() == p * p * p);
  for (const auto& [k, c] : counts) CHECK(c == 1);
}

TEST_CASE("level marginals over exhaustive seeds, n = 1") {
  // p = 2: outputs 0 and 1 exactly once each over the two seeds
  level_hash h;
  h.n = 1;
  h.m = 2;
  h.seed.kappa = 1;
  h.seed.field_prime = 2;
  int zero = 0, one = 0;
  for (u64 c0 = 0; c0 < 2; ++c0) {
    h.seed.coeffs = {c0};
    u32 v = h.eval(1);
    (v == 0 ? zero : one)++;
  }
  CHECK(zero == 1);
  CHECK(one == 1);
}

TEST_CASE("level marginals deviate from ideal by at most the reduction bias") {
  // p = 17, n = 4: residues mod 8 are hit 2 or 3 times in 17; each marginal
  // is within 1/p of the ideal 1/(2n).
  level_hash h;
  h.n = 4;
  h.m = 8;
  h.seed.kappa = 1;
  h.seed.field_prime = 17;
  std::map<u32, int> counts;
  for (u64 c0 = 0; c0 < 17; ++c0) {
    h.seed.coeffs = {c0};
    ++counts[h.eval(3)];
  }
  double p0 = counts[0] / 17.0;
  CHECK(p0 == doctest::Approx(0.5).epsilon(0.13));  // |p0 - 1/2| <= 2n/p ~ .47/...
  CHECK(std::abs(p0 - 0.5) <= 4.0 / 17.0 + 1e-12);
  for (u32 v = 1; v <= 4; ++v) {
    double pv = counts[v] / 17.0;
    CHECK(std::abs(pv - 0.125) <= 1.0 / 17.0 + 1e-12);
  }
}

TEST_CASE("fixed seed and point evaluate identically every call") {
  auto tape = random_tape::from_hex("7777");
  auto h = sample_level(tape, 16, 256, 4);
  for (u64 j = 1; j <= 256; j += 17) {
    u32 first = h.eval(j);
    for (int r = 0; r < 3; ++r) CHECK(h.eval(j) == first);
    CHECK(first <= 16);
  }
}
