#pragma once

#include <cstdint>
#include <cstddef>
#include <atomic>
#include <bit>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace rholab {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;

// Vertices live in [1, n], array values in [1, m].
using vertex_t = std::uint32_t;
using value_t = std::uint64_t;

inline u32 ceil_log2(u64 x) {
  if (x <= 1) return 0;
  return 64u - static_cast<u32>(std::countl_zero(x - 1));
}

// 64-bit finalizer (splitmix64); used for seed derivation, never for
// anything that needs bounded independence.
inline u64 mix64(u64 z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline u64 mix2(u64 a, u64 b) { return mix64(a ^ mix64(b)); }

// (a * b) mod p for p < 2^63; fast path when everything fits in 64 bits.
inline u64 mulmod(u64 a, u64 b, u64 p) {
  if (p <= 0xFFFFFFFFULL) return (a * b) % p;
  return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % p);
}

inline u64 addmod(u64 a, u64 b, u64 p) {
  u64 s = a + b;
  if (s >= p || s < a) s -= p;
  return s;
}

// Chunked parallel loop. Worker w handles items w, w+stride, ... so the
// assignment of items to outputs is schedule-independent.
template <class F>
void parallel_for(u64 count, F&& fn, unsigned threads = 0) {
  if (threads == 0) threads = std::thread::hardware_concurrency();
  if (threads <= 1 || count <= 1) {
    for (u64 i = 0; i < count; ++i) fn(i);
    return;
  }
  if (threads > count) threads = static_cast<unsigned>(count);
  std::atomic<u64> next{0};
  const u64 chunk = std::max<u64>(1, count / (threads * 32));
  auto work = [&] {
    for (;;) {
      u64 begin = next.fetch_add(chunk);
      if (begin >= count) return;
      u64 end = std::min(count, begin + chunk);
      for (u64 i = begin; i < end; ++i) fn(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  for (auto& th : pool) th.join();
}

}  // namespace rholab
