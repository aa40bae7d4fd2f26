#pragma once

// Resource accounting for the low-space procedures: f-evaluations and the
// peak number of live machine words (1 word = one ceil(log2 n)-bit cell).
// Containers on the measured path charge/release through a ledger.

#include "json.hpp"

#include "common.hpp"

namespace rholab {

struct resource_meter {
  u64 oracle_calls = 0;
  u64 cur_words = 0;
  u64 peak_words = 0;

  void count_call() { ++oracle_calls; }
  void charge(u64 words) {
    cur_words += words;
    if (cur_words > peak_words) peak_words = cur_words;
  }
  void release(u64 words) { cur_words -= std::min(words, cur_words); }
  void reset() { oracle_calls = cur_words = peak_words = 0; }

  nlohmann::json to_json() const {
    return nlohmann::json{{"oracle_calls", oracle_calls}, {"peak_words", peak_words}};
  }
};

// RAII charge for a container whose size is known up front.
struct scoped_words {
  resource_meter& meter;
  u64 words;
  scoped_words(resource_meter& m, u64 w) : meter(m), words(w) { meter.charge(w); }
  ~scoped_words() { meter.release(words); }
  scoped_words(const scoped_words&) = delete;
  scoped_words& operator=(const scoped_words&) = delete;
};

}  // namespace rholab
