#pragma once

// Monte Carlo estimators for the hit/connectivity laws. Every event is
// decided by the exact reachability oracle, never by the low-space
// machinery under test. Trials fork independent streams from the base
// seed, so results do not depend on the thread schedule.

#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "json.hpp"

#include "common.hpp"
#include "graph.hpp"
#include "hash_family.hpp"
#include "instance.hpp"
#include "tape.hpp"

namespace rholab {

enum class est_target {
  single_hit,       // Pr[u in Out(x)]
  pair_hit,         // Pr[u, v in Out(x)]
  multi_single_hit, // Pr[u in Out(x_1..x_k)]
  multi_pair_hit,   // Pr[u, v in Out(x_1..x_k)]
  c_connect,        // Pr[u_1..u_c in Out(x)], -1 rewired to 1, injective input
  out_size,         // E[|Out(x)|]
  moment_c          // E[C(|Out(x)|, c)]
};

inline const char* est_target_name(est_target t) {
  switch (t) {
    case est_target::single_hit: return "single_hit";
    case est_target::pair_hit: return "pair_hit";
    case est_target::multi_single_hit: return "multi_single_hit";
    case est_target::multi_pair_hit: return "multi_pair_hit";
    case est_target::c_connect: return "c_connect";
    case est_target::out_size: return "out_size";
    case est_target::moment_c: return "moment_c";
  }
  return "?";
}

inline est_target est_target_from_name(const std::string& s) {
  for (est_target t : {est_target::single_hit, est_target::pair_hit, est_target::multi_single_hit,
                       est_target::multi_pair_hit, est_target::c_connect, est_target::out_size,
                       est_target::moment_c}) {
    if (s == est_target_name(t)) return t;
  }
  throw std::invalid_argument("unknown estimator target: " + s);
}

struct estimator_spec {
  est_target target = est_target::single_hit;
  const instance* inst = nullptr;
  u32 t = 0;      // 0: default (half log n, or half log n/k for multi targets)
  u32 kappa = 0;  // 0: default 20 log n
  u32 k = 1;      // starts per trial for multi targets
  u32 c = 2;      // c_connect / moment_c order
  bool oracle_mode = false;
  u64 trials = 1;
  std::vector<vertex_t> targets;  // hit vertices; defaulted when empty
  random_tape seed;
  unsigned threads = 0;
};

struct estimate_report {
  std::string target;
  double p_hat = 0;     // probability targets
  double std_err = 0;   // binomial for probabilities, mean error otherwise
  double mean = 0;      // out_size / moment_c
  double normalized = 0;  // mean / n^(c/2) for moment_c, mean / sqrt(n) for out_size
  u64 trials = 0;
  u64 hits = 0;
  double seconds = 0;
  nlohmann::json echo;

  nlohmann::json to_json() const {
    nlohmann::json j = echo;
    j["target"] = target;
    j["p_hat"] = p_hat;
    j["std_err"] = std_err;
    j["mean"] = mean;
    j["normalized"] = normalized;
    j["trials"] = trials;
    j["hits"] = hits;
    j["seconds"] = seconds;
    return j;
  }
};

namespace detail_est {

inline std::vector<vertex_t> default_targets(const estimator_spec& spec) {
  u32 n = spec.inst->n();
  u32 want = 1;
  switch (spec.target) {
    case est_target::pair_hit:
    case est_target::multi_pair_hit: want = 2; break;
    case est_target::c_connect: want = spec.c; break;
    default: want = 1; break;
  }
  if (want > n) throw std::invalid_argument("estimator: more targets than vertices");
  std::vector<vertex_t> out;
  for (u32 i = 0; i < want; ++i) out.push_back(1 + (static_cast<u64>(i) * n) / want);
  return out;
}

inline bool contains_all(const std::vector<vertex_t>& sorted_set, const std::vector<vertex_t>& want) {
  for (vertex_t u : want) {
    if (!std::binary_search(sorted_set.begin(), sorted_set.end(), u)) return false;
  }
  return true;
}

}  // namespace detail_est

inline estimate_report estimate(const estimator_spec& spec) {
  if (!spec.inst) throw std::invalid_argument("estimator: no instance");
  if (spec.trials < 1) throw std::invalid_argument("estimator: trials >= 1 required");
  const instance& inst = *spec.inst;
  const u32 n = inst.n();
  const u64 m = inst.m;
  const bool multi = spec.target == est_target::multi_single_hit || spec.target == est_target::multi_pair_hit;
  const u32 k = multi ? spec.k : 1;
  if (k < 1 || (multi && k > n)) throw std::invalid_argument("estimator: bad start count");
  const u32 t = spec.t ? spec.t : (multi ? default_t_multi(n, k) : default_t_single(n));
  const u32 kappa = spec.kappa ? spec.kappa : default_kappa(n);
  const bool connected = spec.target == est_target::c_connect;
  if (connected && !is_duplicate_free(inst)) throw std::invalid_argument("c_connect needs an injective instance");

  std::vector<vertex_t> targets = spec.targets.empty() ? detail_est::default_targets(spec) : spec.targets;
  {
    auto sorted = targets;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::invalid_argument("estimator: targets must be distinct");
    for (vertex_t u : sorted) {
      if (u < 1 || u > n) throw std::invalid_argument("estimator: target out of range");
    }
  }

  const bool counting = spec.target == est_target::out_size || spec.target == est_target::moment_c;
  std::vector<u64> per_trial(spec.trials);

  auto t0 = std::chrono::steady_clock::now();
  parallel_for(
      spec.trials,
      [&](u64 trial) {
        random_tape trial_tape = spec.seed.fork(trial);
        random_tape hash_tape = trial_tape.fork(0);
        random_tape start_tape = trial_tape.fork(1);
        std::vector<vertex_t> starts(k);
        for (u32 i = 0; i < k; ++i) starts[i] = start_tape.draw_vertex(n);

        std::vector<vertex_t> out;
        if (spec.oracle_mode) {
          oracle_hash H(n, m, t, hash_tape);
          out = connected ? out_set_oracle_connected(inst, H, starts) : out_set_oracle(inst, H, starts);
        } else {
          layered_hash H = sample_layered(hash_tape, n, m, t, kappa);
          out = connected ? out_set_oracle_connected(inst, H, starts) : out_set_oracle(inst, H, starts);
        }

        if (counting) {
          u64 sz = out.size();
          if (spec.target == est_target::out_size) {
            per_trial[trial] = sz;
          } else {
            u64 v = 1;  // C(sz, c)
            for (u32 i = 0; i < spec.c; ++i) {
              if (sz < i + 1) { v = 0; break; }
              v = v * (sz - i) / (i + 1);
            }
            per_trial[trial] = v;
          }
        } else {
          per_trial[trial] = detail_est::contains_all(out, targets) ? 1 : 0;
        }
      },
      spec.threads);
  auto t1 = std::chrono::steady_clock::now();

  estimate_report rep;
  rep.target = est_target_name(spec.target);
  rep.trials = spec.trials;
  rep.seconds = std::chrono::duration<double>(t1 - t0).count();
  unsigned __int128 total = 0;
  long double sq = 0;
  for (u64 v : per_trial) {
    total += v;
    sq += static_cast<long double>(v) * static_cast<long double>(v);
  }
  double mean = static_cast<double>(static_cast<long double>(total) / spec.trials);
  if (counting) {
    rep.mean = mean;
    double scale = spec.target == est_target::moment_c ? std::pow(static_cast<double>(n), spec.c / 2.0)
                                                       : std::sqrt(static_cast<double>(n));
    rep.normalized = mean / scale;
    long double var = sq / spec.trials - static_cast<long double>(mean) * mean;
    rep.std_err = std::sqrt(std::max<double>(0.0, static_cast<double>(var)) / spec.trials);
  } else {
    rep.hits = static_cast<u64>(total);
    rep.p_hat = mean;
    rep.std_err = std::sqrt(std::max(0.0, mean * (1.0 - mean)) / spec.trials);
  }
  rep.echo = {{"n", n},       {"m", m},         {"t", t},
              {"kappa", kappa}, {"k", k},       {"c", spec.c},
              {"mode", spec.oracle_mode ? "oracle" : "prf"},
              {"targets", targets}};
  return rep;
}

// One estimate per axis value; rows keep going past individual failures.
struct sweep_row {
  double axis_value = 0;
  estimate_report report;
  bool failed = false;
  std::string error;
};

inline std::vector<sweep_row> sweep(const estimator_spec& base, const std::string& axis,
                                    const std::vector<u64>& values) {
  std::vector<sweep_row> rows;
  for (u64 v : values) {
    estimator_spec spec = base;
    if (axis == "t") spec.t = static_cast<u32>(v);
    else if (axis == "kappa") spec.kappa = static_cast<u32>(v);
    else if (axis == "k") spec.k = static_cast<u32>(v);
    else if (axis == "c") spec.c = static_cast<u32>(v);
    else if (axis == "trials") spec.trials = v;
    else throw std::invalid_argument("sweep: unknown axis " + axis);
    spec.seed = base.seed.fork(0xA5A5 + v);
    sweep_row row;
    row.axis_value = static_cast<double>(v);
    try {
      row.report = estimate(spec);
    } catch (const std::exception& e) {
      row.failed = true;
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string sweep_csv(const std::string& axis, const std::vector<sweep_row>& rows) {
  std::string out = axis + ",p_hat,mean,std_err,trials,seconds,status\n";
  char buf[256];
  for (const auto& r : rows) {
    if (r.failed) {
      std::snprintf(buf, sizeof buf, "%.17g,,,,,failed: %s\n", r.axis_value, r.error.c_str());
    } else {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%llu,%.3f,ok\n", r.axis_value,
                    r.report.p_hat, r.report.mean, r.report.std_err,
                    static_cast<unsigned long long>(r.report.trials), r.report.seconds);
    }
    out += buf;
  }
  return out;
}

}  // namespace rholab
