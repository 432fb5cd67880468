#include "ktdeque/fuzz.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "ktdeque/cadeque.hpp"
#include "ktdeque/deque.hpp"
#include "ktdeque/oracle.hpp"
#include "ktdeque/work_counter.hpp"

namespace ktdeque::fuzz {

namespace {

using Val = std::int64_t;
using Oracle = OracleSeq<Val>;

constexpr std::size_t kMaxMessages = 8;

struct CadequeAdapter {
  using S = Cadeque<Val>;
  Cadeque<Val>::ValidationCache cache;
  static constexpr bool has_concat = true;
  std::vector<std::string> validate(const S& s) { return s.validate(&cache); }
  static S concat(const S& a, const S& b) { return S::concat(a, b); }
};

struct DequeAdapter {
  using S = Deque<Val>;
  static constexpr bool has_concat = false;
  std::vector<std::string> validate(const S& s) { return s.validate_deep(); }
  static S concat(const S& a, const S&) { return a; }
};

template <class Adapter>
Report replay(const Scenario& sc, const CheckOptions& opts) {
  using S = typename Adapter::S;
  Adapter ad;
  Report rep;
  rep.seed = sc.seed;
  std::vector<S> pool{S()};
  std::vector<Oracle> ref{Oracle()};
  std::vector<std::uint64_t> dig{digest({})};

  auto discrepancy = [&](std::size_t i, std::string what, const std::vector<Val>& exp, const std::vector<Val>& act) {
    rep.discrepancies.push_back(Discrepancy{i, std::move(what), digest(exp), digest(act), exp.size(), act.size()});
  };

  for (std::size_t i = 0; i < sc.steps.size(); ++i) {
    const OpStep& st = sc.steps[i];
    if (st.a >= pool.size() || st.b >= pool.size()) throw std::domain_error("run_differential: operand index out of range");
    const S& a = pool[st.a];
    const Oracle& oa = ref[st.a];
    std::optional<S> next;
    std::optional<Oracle> onext;
    std::optional<Val> got, want;
    bool extraction = false;
    {
      work::Scope scope;
      switch (st.kind) {
        case OpKind::Push: next = a.push(st.value); break;
        case OpKind::Inject: next = a.inject(st.value); break;
        case OpKind::Pop:
          extraction = true;
          if (auto r = a.pop()) {
            got = r->first;
            next = std::move(r->second);
          }
          break;
        case OpKind::Eject:
          extraction = true;
          if (auto r = a.eject()) {
            got = r->second;
            next = std::move(r->first);
          }
          break;
        case OpKind::Concat:
          if (!Adapter::has_concat) throw std::domain_error("run_differential: this target has no concat");
          next = Adapter::concat(a, pool[st.b]);
          break;
      }
      auto w = scope.read();
      auto& slot = rep.max_work[std::size_t(st.kind)];
      slot = std::max(slot, w);
    }
    switch (st.kind) {
      case OpKind::Push: onext = oa.push(st.value); break;
      case OpKind::Inject: onext = oa.inject(st.value); break;
      case OpKind::Pop:
        if (auto r = oa.pop()) {
          want = r->first;
          onext = std::move(r->second);
        }
        break;
      case OpKind::Eject:
        if (auto r = oa.eject()) {
          want = r->second;
          onext = std::move(r->first);
        }
        break;
      case OpKind::Concat: onext = Oracle::concat(oa, ref[st.b]); break;
    }
    if (extraction) {
      if (got != want) discrepancy(i, std::string(op_name(st.kind)) + " returned a different element", oa.items(), a.to_vector());
      if (!next) next = a;
      if (!onext) onext = oa;
    }

    // The oracle result is the fringe equation's right-hand side.
    const std::vector<Val>& exp = onext->items();
    std::vector<Val> act = next->to_vector();
    ++rep.fringe_checks;
    bool same = next->size() == exp.size() && act.size() == exp.size();
    if (same) {
      if (exp.size() <= opts.full_compare_cap) {
        same = act == exp;
      } else {
        std::size_t k = std::min(opts.sample_k, exp.size());
        same = std::equal(exp.begin(), exp.begin() + k, act.begin()) && std::equal(exp.end() - k, exp.end(), act.end() - k) &&
               digest(exp) == digest(act);
      }
    }
    if (!same) discrepancy(i, std::string(op_name(st.kind)) + " result differs from the oracle", exp, act);

    auto errs = ad.validate(*next);
    if (!errs.empty()) {
      ++rep.validator_failures;
      if (rep.validator_messages.size() < kMaxMessages)
        rep.validator_messages.push_back("step " + std::to_string(i) + ": " + errs.front());
    }

    if (digest(a.to_vector()) != dig[st.a]) ++rep.persistence_failures;
    if (st.kind == OpKind::Concat && digest(pool[st.b].to_vector()) != dig[st.b]) ++rep.persistence_failures;

    rep.max_length = std::max(rep.max_length, exp.size());
    dig.push_back(digest(exp));
    pool.push_back(std::move(*next));
    ref.push_back(std::move(*onext));
    ++rep.steps_run;
  }
  for (std::size_t k = 0; k < pool.size(); ++k)
    if (digest(pool[k].to_vector()) != dig[k]) ++rep.persistence_failures;
  return rep;
}

}  // namespace

std::uint64_t SplitMix64::below(std::uint64_t n) noexcept {
  // Lemire's multiply-shift with rejection.
  unsigned __int128 m = (unsigned __int128)next() * n;
  std::uint64_t low = std::uint64_t(m);
  if (low < n) {
    std::uint64_t t = -n % n;
    while (low < t) {
      m = (unsigned __int128)next() * n;
      low = std::uint64_t(m);
    }
  }
  return std::uint64_t(m >> 64);
}

std::string_view op_name(OpKind k) noexcept {
  switch (k) {
    case OpKind::Push: return "push";
    case OpKind::Pop: return "pop";
    case OpKind::Inject: return "inject";
    case OpKind::Eject: return "eject";
    case OpKind::Concat: return "concat";
  }
  return "?";
}

std::uint64_t digest(const std::vector<std::int64_t>& xs) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (auto x : xs) h = h * 0x100000001b3ULL + std::uint64_t(x) + 1;
  return h ^ (std::uint64_t(xs.size()) * 0x9e3779b97f4a7c15ULL);
}

Scenario gen_scenario(std::uint64_t seed, const ScenarioConfig& cfg) {
  if (!(cfg.concat_fraction >= 0 && cfg.concat_fraction <= 1)) throw std::domain_error("gen_scenario: concat_fraction outside [0, 1]");
  if (!(cfg.recent_bias >= 0 && cfg.recent_bias <= 1)) throw std::domain_error("gen_scenario: recent_bias outside [0, 1]");
  if (cfg.value_range <= 0) throw std::domain_error("gen_scenario: value_range must be positive");
  if (cfg.max_len == 0) throw std::domain_error("gen_scenario: max_len must be positive");
  double total = 0;
  for (double w : cfg.op_weights) {
    if (!(w >= 0)) throw std::domain_error("gen_scenario: negative op weight");
    total += w;
  }
  if (!(total > 0)) throw std::domain_error("gen_scenario: op weights sum to zero");

  SplitMix64 rng(seed);
  Scenario s;
  s.seed = seed;
  s.steps.reserve(cfg.steps);
  std::vector<std::size_t> len{0};
  auto pick = [&] { return rng.unit() < cfg.recent_bias ? len.size() - 1 : std::size_t(rng.below(len.size())); };
  for (std::size_t i = 0; i < cfg.steps; ++i) {
    OpStep st{OpKind::Push, 0, 0, 0};
    if (rng.unit() < cfg.concat_fraction) {
      st.kind = OpKind::Concat;
      st.a = pick();
      for (int tries = 0; tries < 8; ++tries) {
        std::size_t b = pick();
        if (len[st.a] + len[b] <= cfg.max_len) {
          st.b = b;
          break;
        }
      }
      len.push_back(len[st.a] + len[st.b]);
    } else {
      constexpr OpKind basic[4] = {OpKind::Push, OpKind::Pop, OpKind::Inject, OpKind::Eject};
      double u = rng.unit() * total;
      std::size_t k = 0;
      while (k < 3 && u >= cfg.op_weights[k]) u -= cfg.op_weights[k++];
      st.kind = basic[k];
      st.a = pick();
      std::size_t n = len[st.a];
      if (st.kind == OpKind::Push || st.kind == OpKind::Inject) {
        st.value = std::int64_t(rng.below(std::uint64_t(cfg.value_range)));
        ++n;
      } else if (n > 0) {
        --n;
      }
      len.push_back(n);
    }
    s.steps.push_back(st);
  }
  return s;
}

Report run_differential(const Scenario& s, Target target, const CheckOptions& opts) {
  if (target == Target::Cadeque) return replay<CadequeAdapter>(s, opts);
  return replay<DequeAdapter>(s, opts);
}

BatchReport run_batch(const BatchConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<Report> reports(cfg.seeds);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < cfg.seeds;) {
      try {
        Scenario s = gen_scenario(cfg.first_seed + i, cfg.scenario);
        reports[i] = run_differential(s, cfg.target, cfg.check);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = cfg.seeds;
      }
    }
  };
  unsigned n = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  n = unsigned(std::min<std::size_t>(n, std::max<std::size_t>(cfg.seeds, 1)));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  BatchReport out;
  out.target = cfg.target;
  out.scenarios = cfg.seeds;
  for (const Report& r : reports) {
    out.steps_run += r.steps_run;
    out.validator_failures += r.validator_failures;
    out.persistence_failures += r.persistence_failures;
    out.fringe_checks += r.fringe_checks;
    out.max_length = std::max(out.max_length, r.max_length);
    for (std::size_t k = 0; k < 5; ++k) out.max_work[k] = std::max(out.max_work[k], r.max_work[k]);
    out.discrepancy_count += r.discrepancies.size();
    for (const auto& d : r.discrepancies)
      if (out.discrepancies.size() < kMaxMessages) out.discrepancies.emplace_back(r.seed, d);
    for (const auto& m : r.validator_messages)
      if (out.validator_messages.size() < kMaxMessages) out.validator_messages.push_back("seed " + std::to_string(r.seed) + " " + m);
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

std::string to_json(const BatchReport& r, int indent) {
  nlohmann::json j;
  j["rng"] = r.rng;
  j["target"] = r.target == Target::Cadeque ? "cadeque" : "deque";
  j["scenarios"] = r.scenarios;
  j["steps_run"] = r.steps_run;
  j["validator_failures"] = r.validator_failures;
  j["persistence_failures"] = r.persistence_failures;
  j["fringe_checks"] = r.fringe_checks;
  j["max_length"] = r.max_length;
  j["seconds"] = r.seconds;
  nlohmann::json work = nlohmann::json::object();
  for (OpKind k : all_ops) {
    if (r.target == Target::Deque && k == OpKind::Concat) continue;
    work[std::string(op_name(k))] = r.max_work[std::size_t(k)];
  }
  j["max_work_counters"] = work;
  j["discrepancy_count"] = r.discrepancy_count;
  nlohmann::json ds = nlohmann::json::array();
  for (const auto& [seed, d] : r.discrepancies)
    ds.push_back({{"seed", seed},
                  {"step", d.step},
                  {"what", d.what},
                  {"expected_digest", d.expected_digest},
                  {"actual_digest", d.actual_digest},
                  {"expected_length", d.expected_length},
                  {"actual_length", d.actual_length}});
  j["discrepancies"] = ds;
  j["validator_messages"] = r.validator_messages;
  return j.dump(indent);
}

}  // namespace ktdeque::fuzz
