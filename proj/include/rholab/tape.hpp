#pragma once

// One-way random bit tape. Bits come from a counter-mode stream over the
// master seed: block i is mix2(s0, s1 + i), consumed LSB-first. The model
// only forbids re-reading old bits; the position counter enforces that.

#include <cassert>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "common.hpp"

namespace rholab {

struct random_tape {
  random_tape() : s0_(0), s1_(0) {}
  random_tape(u64 s0, u64 s1) : s0_(s0), s1_(s1) {}

  // Hex string parsed as bytes (two chars each, odd tail = one low nibble),
  // loaded little-endian: byte 0 is the low byte of s0, byte 8 the low byte
  // of s1. Bytes past 16 fold in with mix2.
  static random_tape from_hex(std::string_view hex) {
    std::vector<u64> bytes;
    u64 cur = 0;
    int half = 0;
    for (char ch : hex) {
      if (std::isspace(static_cast<unsigned char>(ch))) continue;
      u64 v;
      if (ch >= '0' && ch <= '9') v = static_cast<u64>(ch - '0');
      else if (ch >= 'a' && ch <= 'f') v = static_cast<u64>(ch - 'a' + 10);
      else if (ch >= 'A' && ch <= 'F') v = static_cast<u64>(ch - 'A' + 10);
      else throw std::invalid_argument("seed: invalid hex character");
      if (half == 0) { cur = v << 4; half = 1; }
      else { bytes.push_back(cur | v); half = 0; }
    }
    if (half == 1) bytes.push_back(cur >> 4);
    u64 w[2] = {0, 0};
    for (std::size_t i = 0; i < bytes.size(); ++i) {
      if (i < 16) w[i / 8] |= bytes[i] << ((i % 8) * 8);
      else w[i % 2] = mix2(w[i % 2], bytes[i] + i);
    }
    return random_tape(w[0], w[1]);
  }

  // Independent derived stream, e.g. one per trial.
  random_tape fork(u64 stream_id) const {
    return random_tape(mix2(s0_, stream_id), mix2(s1_, ~stream_id));
  }

  u64 position() const { return bit_pos_; }

  // count <= 64 bits, returned in the low bits of the result.
  u64 draw_bits(unsigned count) {
    assert(count <= 64);
    u64 out = 0;
    for (unsigned got = 0; got < count;) {
      if (fill_ == 0) refill();
      unsigned take = std::min<unsigned>(count - got, fill_);
      out |= (cache_ & ((take == 64) ? ~0ULL : ((1ULL << take) - 1))) << got;
      cache_ = (take == 64) ? 0 : (cache_ >> take);
      fill_ -= take;
      got += take;
    }
    bit_pos_ += count;
    return out;
  }

  // One bit per entry, in draw order.
  std::vector<unsigned char> draw_bit_string(u64 count) {
    std::vector<unsigned char> bits(count);
    for (u64 i = 0; i < count; ++i) bits[i] = static_cast<unsigned char>(draw_bits(1));
    return bits;
  }

  // Uniform value in [0, bound) by drawing ceil_log2(bound) bits and
  // rejecting overshoots; used for shuffles and start sampling where an
  // exact uniform is wanted.
  u64 draw_below(u64 bound) {
    assert(bound >= 1);
    if (bound == 1) return 0;
    unsigned bits = ceil_log2(bound);
    for (;;) {
      u64 v = draw_bits(bits);
      if (v < bound) return v;
    }
  }

  vertex_t draw_vertex(u32 n) { return static_cast<vertex_t>(draw_below(n)) + 1; }

 private:
  void refill() {
    cache_ = mix2(s0_, s1_ + block_++);
    fill_ = 64;
  }

  u64 s0_, s1_;
  u64 block_ = 0;
  u64 cache_ = 0;
  unsigned fill_ = 0;
  u64 bit_pos_ = 0;
};

// The spec-level operation: draw `count` bits as a 0/1 string.
inline std::vector<unsigned char> tape_draw_bits(random_tape& tape, u64 count) {
  return tape.draw_bit_string(count);
}

}  // namespace rholab
