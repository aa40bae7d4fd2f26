#pragma once

// End-to-end Element Distinctness and Set Intersection.
//
// Each trial draws a fresh layered hash and starting vertices from a
// per-trial stream and runs COLLIDE. Element Distinctness exits on the
// first verified witness (one-sided: a witness is re-checked against the
// array); Set Intersection runs its whole schedule and prints every found
// value, duplicates allowed. Trials run in fixed-size blocks, each block
// parallel, and the winner is the success with the smallest trial id, so
// outcomes are reproducible under any thread schedule.

#include <algorithm>
#include <cmath>
#include <ostream>
#include <vector>

#include "json.hpp"

#include "collide.hpp"
#include "common.hpp"
#include "graph.hpp"
#include "hash_family.hpp"
#include "instance.hpp"
#include "meter.hpp"
#include "tape.hpp"

namespace rholab {

struct solver_config {
  u64 space_budget = 1;   // S: starting vertices per multi-start trial
  u32 kappa = 0;          // 0: 20 log n
  u32 t_single = 0;       // 0: ceil(log2(n) / 2)
  u32 t_multi = 0;        // 0: ceil(log2(n / S) / 2)
  u64 single_trials = 0;  // 0: schedule defaults below
  u64 multi_trials = 0;
  double trial_const = 8.0;  // multiplier inside every Theta(.)
  random_tape seed;
  unsigned threads = 0;
  bool keep_trial_log = false;
};

struct trial_record {
  u64 trial = 0;
  u64 starts = 0;
  u64 oracle_calls = 0;
  u64 peak_words = 0;
  bool success = false;
};

struct solver_outcome {
  bool collision_found = false;
  collision_report witnesses;       // from the winning trial
  u64 winning_trial = 0;
  u64 trials_run = 0;               // trials counted toward resources
  u64 total_oracle_calls = 0;
  u64 max_peak_words = 0;
  u64 hash_seed_bits = 0;
  std::vector<trial_record> log;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["verdict"] = collision_found ? "collision_found" : "distinct";
    auto& gs = j["witnesses"] = nlohmann::json::array();
    for (const auto& g : witnesses.groups) gs.push_back({{"value", g.y}, {"positions", g.positions}});
    j["trials_run"] = trials_run;
    j["total_oracle_calls"] = total_oracle_calls;
    j["max_peak_words"] = max_peak_words;
    j["hash_seed_bits"] = hash_seed_bits;
    if (collision_found) j["winning_trial"] = winning_trial;
    return j;
  }
};

namespace detail_solver {

// A verified group re-reads the array so a collide defect can never
// manufacture a witness.
inline bool verify_groups(const instance& inst, const collision_report& rep) {
  if (rep.groups.empty() || !rep.complete) return false;
  for (const auto& g : rep.groups) {
    if (g.positions.size() < 2) return false;
    for (vertex_t u : g.positions) {
      if (u < 1 || u > inst.n() || inst.at(u) != g.y) return false;
    }
    for (std::size_t i = 1; i < g.positions.size(); ++i) {
      if (g.positions[i] == g.positions[i - 1]) return false;
    }
  }
  return true;
}

struct phase_result {
  bool found = false;
  u64 winner = 0;
  collision_report witnesses;
  u64 trials_counted = 0;
  u64 calls = 0;
  u64 peak = 0;
};

// Runs trials [0, count) with early exit at the smallest successful id.
// make_trial(trial_id, meter) -> collision_report.
template <class MakeTrial>
phase_result run_phase(u64 count, unsigned threads, bool early_exit, const instance& inst,
                       MakeTrial&& make_trial, std::vector<trial_record>* log, u64 trial_id_base,
                       u64 starts_per_trial) {
  phase_result out;
  if (threads == 0) threads = std::thread::hardware_concurrency();
  const u64 block = early_exit ? std::max<u64>(threads * 8, 16) : count;
  std::vector<trial_record> recs;
  std::vector<collision_report> reports;
  for (u64 base = 0; base < count && !(early_exit && out.found); base += block) {
    u64 end = std::min(count, base + block);
    recs.assign(end - base, {});
    reports.assign(end - base, {});
    parallel_for(
        end - base,
        [&](u64 i) {
          resource_meter meter;
          reports[i] = make_trial(base + i, meter);
          recs[i] = {trial_id_base + base + i, starts_per_trial, meter.oracle_calls,
                     meter.peak_words, verify_groups(inst, reports[i])};
        },
        threads);
    for (u64 i = 0; i < end - base; ++i) {
      if (log) log->push_back(recs[i]);
      out.calls += recs[i].oracle_calls;
      out.peak = std::max(out.peak, recs[i].peak_words);
      ++out.trials_counted;
      if (recs[i].success && !out.found) {
        out.found = true;
        out.winner = trial_id_base + base + i;
        out.witnesses = reports[i];
        if (early_exit) break;
      }
    }
  }
  return out;
}

}  // namespace detail_solver

// Theta(n log n) single-start trials with the half-log-n hash.
inline solver_outcome solve_ed_lowspace(const instance& inst, const solver_config& cfg) {
  const u32 n = inst.n();
  const u64 m = inst.m;
  const u32 t = cfg.t_single ? cfg.t_single : default_t_single(n);
  const u32 kappa = cfg.kappa ? cfg.kappa : default_kappa(n);
  const u64 trials = cfg.single_trials
                         ? cfg.single_trials
                         : static_cast<u64>(std::ceil(cfg.trial_const * n * std::max<u32>(1, ceil_log2(n))));
  solver_outcome out;
  {
    random_tape probe = cfg.seed.fork(~0ULL);
    out.hash_seed_bits = sample_layered(probe, n, m, t, kappa).seed_bits();
  }
  std::vector<trial_record>* log = cfg.keep_trial_log ? &out.log : nullptr;
  auto phase = detail_solver::run_phase(
      trials, cfg.threads, /*early_exit=*/true, inst,
      [&](u64 trial, resource_meter& meter) {
        random_tape tape = cfg.seed.fork(trial);
        layered_hash H = sample_layered(tape, n, m, t, kappa);
        vertex_t x = tape.draw_vertex(n);
        return collide(inst, H, {x}, meter);
      },
      log, 0, 1);
  out.collision_found = phase.found;
  out.winning_trial = phase.winner;
  out.witnesses = phase.witnesses;
  out.trials_run = phase.trials_counted;
  out.total_oracle_calls = phase.calls;
  out.max_peak_words = phase.peak;
  return out;
}

// Two-phase tradeoff schedule: Theta(log n) single-start trials, then
// Theta((n / S) log n) trials of S uniform starts each.
inline solver_outcome solve_ed_tradeoff(const instance& inst, const solver_config& cfg) {
  const u32 n = inst.n();
  const u64 m = inst.m;
  const u64 S = std::max<u64>(1, std::min<u64>(cfg.space_budget, n));
  const u32 ts = cfg.t_single ? cfg.t_single : default_t_single(n);
  const u32 tm = cfg.t_multi ? cfg.t_multi : default_t_multi(n, S);
  const u32 kappa = cfg.kappa ? cfg.kappa : default_kappa(n);
  const u64 logn = std::max<u32>(1, ceil_log2(n));
  const u64 p1 = cfg.single_trials ? cfg.single_trials
                                   : static_cast<u64>(std::ceil(cfg.trial_const * logn));
  const u64 p2 = cfg.multi_trials
                     ? cfg.multi_trials
                     : static_cast<u64>(std::ceil(cfg.trial_const * (static_cast<double>(n) / S) * logn));
  solver_outcome out;
  {
    random_tape probe = cfg.seed.fork(~0ULL);
    out.hash_seed_bits = sample_layered(probe, n, m, tm, kappa).seed_bits();
  }
  std::vector<trial_record>* log = cfg.keep_trial_log ? &out.log : nullptr;

  auto phase1 = detail_solver::run_phase(
      p1, cfg.threads, true, inst,
      [&](u64 trial, resource_meter& meter) {
        random_tape tape = cfg.seed.fork(trial);
        layered_hash H = sample_layered(tape, n, m, ts, kappa);
        vertex_t x = tape.draw_vertex(n);
        return collide(inst, H, {x}, meter);
      },
      log, 0, 1);
  out.trials_run = phase1.trials_counted;
  out.total_oracle_calls = phase1.calls;
  out.max_peak_words = phase1.peak;
  if (phase1.found) {
    out.collision_found = true;
    out.winning_trial = phase1.winner;
    out.witnesses = phase1.witnesses;
    return out;
  }

  auto phase2 = detail_solver::run_phase(
      p2, cfg.threads, true, inst,
      [&](u64 trial, resource_meter& meter) {
        random_tape tape = cfg.seed.fork(p1 + trial);
        layered_hash H = sample_layered(tape, n, m, tm, kappa);
        std::vector<vertex_t> starts(S);
        for (u64 i = 0; i < S; ++i) starts[i] = tape.draw_vertex(n);
        return collide(inst, H, starts, meter);
      },
      log, p1, S);
  out.trials_run += phase2.trials_counted;
  out.total_oracle_calls += phase2.calls;
  out.max_peak_words = std::max(out.max_peak_words, phase2.peak);
  out.collision_found = phase2.found;
  out.winning_trial = phase2.winner;
  out.witnesses = phase2.witnesses;
  return out;
}

struct si_outcome {
  std::vector<value_t> printed;  // in trial order, duplicates preserved
  std::vector<value_t> distinct; // sorted unique
  u64 trials_run = 0;
  u64 total_oracle_calls = 0;
  u64 max_peak_words = 0;
  u64 hash_seed_bits = 0;

  nlohmann::json to_json() const {
    return nlohmann::json{{"printed", printed},
                          {"distinct", distinct},
                          {"trials_run", trials_run},
                          {"total_oracle_calls", total_oracle_calls},
                          {"max_peak_words", max_peak_words},
                          {"hash_seed_bits", hash_seed_bits}};
  }
};

// Theta((n / S) log^2 n) trials of S starts over the concatenated array;
// the graph lives on [2n], so the hash range follows suit.
inline si_outcome solve_si(const instance& a, const instance& b, const solver_config& cfg,
                           std::ostream* print_to = nullptr) {
  if (!is_duplicate_free(a) || !is_duplicate_free(b))
    throw std::invalid_argument("solve_si: inputs must be duplicate-free");
  const instance c = concat_instances(a, b);
  const u32 N = c.n();
  const u64 m = c.m;
  const u64 S = std::max<u64>(1, std::min<u64>(cfg.space_budget, N));
  const u32 tm = cfg.t_multi ? cfg.t_multi : default_t_multi(N, S);
  const u32 kappa = cfg.kappa ? cfg.kappa : default_kappa(N);
  const u64 logn = std::max<u32>(1, ceil_log2(a.n()));
  const u64 trials = cfg.multi_trials
                         ? cfg.multi_trials
                         : static_cast<u64>(std::ceil(cfg.trial_const *
                                                      (static_cast<double>(a.n()) / S) * logn * logn));
  si_outcome out;
  {
    random_tape probe = cfg.seed.fork(~0ULL);
    out.hash_seed_bits = sample_layered(probe, N, m, tm, kappa).seed_bits();
  }
  std::vector<std::vector<value_t>> found(trials);
  std::vector<u64> calls(trials, 0), peaks(trials, 0);
  parallel_for(
      trials,
      [&](u64 trial) {
        random_tape tape = cfg.seed.fork(trial);
        layered_hash H = sample_layered(tape, N, m, tm, kappa);
        std::vector<vertex_t> starts(S);
        for (u64 i = 0; i < S; ++i) starts[i] = tape.draw_vertex(N);
        resource_meter meter;
        auto rep = collide(c, H, starts, meter);
        calls[trial] = meter.oracle_calls;
        peaks[trial] = meter.peak_words;
        if (detail_solver::verify_groups(c, rep)) {
          for (const auto& g : rep.groups) found[trial].push_back(g.y);
        }
      },
      cfg.threads);
  for (u64 i = 0; i < trials; ++i) {
    out.total_oracle_calls += calls[i];
    out.max_peak_words = std::max(out.max_peak_words, peaks[i]);
    for (value_t y : found[i]) {
      out.printed.push_back(y);
      if (print_to) (*print_to) << y << '\n';
    }
  }
  out.trials_run = trials;
  out.distinct = out.printed;
  std::sort(out.distinct.begin(), out.distinct.end());
  out.distinct.erase(std::unique(out.distinct.begin(), out.distinct.end()), out.distinct.end());
  return out;
}

}  // namespace rholab
