#include "ktdeque/bench.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <iomanip>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "ktdeque/cadeque.hpp"
#include "ktdeque/deque.hpp"
#include "ktdeque/oracle.hpp"
#include "ktdeque/work_counter.hpp"

namespace ktdeque::bench {

namespace {

using Val = std::int64_t;
using fuzz::OpKind;
using Clock = std::chrono::steady_clock;

// Singly linked persistent list. Inject, eject and concat copy the spine.
class List {
  struct Cell {
    Val v;
    std::shared_ptr<Cell> next;
    ~Cell() {
      // Unlink iteratively so long spines do not recurse.
      auto n = std::move(next);
      while (n && n.use_count() == 1) n = std::move(n->next);
    }
  };
  using Ptr = std::shared_ptr<Cell>;

 public:
  List() = default;
  std::size_t size() const noexcept { return size_; }

  List push(Val x) const { return List(cell(x, head_), size_ + 1); }
  List inject(Val x) const { return List(copy_onto(head_, size_, cell(x, nullptr)), size_ + 1); }
  std::optional<std::pair<Val, List>> pop() const {
    if (!head_) return std::nullopt;
    return std::make_pair(head_->v, List(head_->next, size_ - 1));
  }
  std::optional<std::pair<List, Val>> eject() const {
    if (!head_) return std::nullopt;
    const Cell* last = head_.get();
    while (last->next) last = last->next.get();
    return std::make_pair(List(copy_onto(head_, size_ - 1, nullptr), size_ - 1), last->v);
  }
  static List concat(const List& a, const List& b) { return List(copy_onto(a.head_, a.size_, b.head_), a.size_ + b.size_); }

 private:
  List(Ptr h, std::size_t n) : head_(std::move(h)), size_(n) {}

  static Ptr cell(Val v, Ptr next) {
    work::note_construction();
    auto c = std::make_shared<Cell>();
    c->v = v;
    c->next = std::move(next);
    return c;
  }

  // Copies the first n cells of src in front of tail.
  static Ptr copy_onto(const Ptr& src, std::size_t n, Ptr tail) {
    if (n == 0) return tail;
    Ptr head = cell(src->v, nullptr);
    Cell* at = head.get();
    const Cell* from = src->next.get();
    for (std::size_t i = 1; i < n; ++i, from = from->next.get()) {
      at->next = cell(from->v, nullptr);
      at = at->next.get();
    }
    at->next = std::move(tail);
    return head;
  }

  Ptr head_;
  std::size_t size_ = 0;
};

// Uniform interface over the measured structures.
template <class S>
struct Ops {
  static S push(const S& s, Val v) { return s.push(v); }
  static S inject(const S& s, Val v) { return s.inject(v); }
  static auto pop(const S& s) { return s.pop(); }
  static auto eject(const S& s) { return s.eject(); }
  static S concat(const S& a, const S& b) { return S::concat(a, b); }
};

template <>
struct Ops<Deque<Val>> {
  using S = Deque<Val>;
  static S push(const S& s, Val v) { return s.push(v); }
  static S inject(const S& s, Val v) { return s.inject(v); }
  static auto pop(const S& s) { return s.pop(); }
  static auto eject(const S& s) { return s.eject(); }
  // No native concat: inject every element of b.
  static S concat(const S& a, const S& b) {
    S r = a;
    b.for_each([&](const Val& x) { r = r.inject(x); });
    return r;
  }
};

template <class S>
std::size_t length_of(const S& s) {
  return s.size();
}

template <class F>
double time_once(F& f, std::size_t k) {
  using R = decltype(f());
  std::vector<R> sink;
  sink.reserve(k);
  auto t0 = Clock::now();
  for (std::size_t j = 0; j < k; ++j) sink.push_back(f());
  auto t1 = Clock::now();
  return double(std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
}

// Median ns per call of f(input) over `replays` timed batches, cycling
// through the inputs. The batch length doubles until one batch is long
// enough for the clock.
template <class In, class F>
double measure(const std::vector<In>& inputs, F f, unsigned replays, double min_batch_ns) {
  std::size_t k = 1;
  {
    auto g = [&] { return f(inputs[0]); };
    while (k < (std::size_t(1) << 20) && time_once(g, k) < min_batch_ns) k *= 2;
  }
  std::vector<double> samples;
  samples.reserve(replays);
  for (unsigned r = 0; r < replays; ++r) {
    const In& in = inputs[r % inputs.size()];
    auto g = [&] { return f(in); };
    samples.push_back(time_once(g, k) / double(k));
  }
  auto mid = samples.begin() + samples.size() / 2;
  std::nth_element(samples.begin(), mid, samples.end());
  return *mid;
}

template <class In, class F>
std::uint64_t max_work(const std::vector<In>& inputs, F f) {
  std::uint64_t w = 0;
  for (const In& in : inputs) {
    work::Scope scope;
    auto r = f(in);
    w = std::max(w, scope.read());
  }
  return w;
}

std::uint64_t median_length(std::vector<std::uint64_t> xs) {
  auto mid = xs.begin() + (xs.size() - 1) / 2;
  std::nth_element(xs.begin(), mid, xs.end());
  return *mid;
}

template <class S>
class Runner {
 public:
  Runner(std::string name, const BenchConfig& cfg, std::vector<S> pop, std::vector<std::pair<std::size_t, std::size_t>> pairs_by_bin_flat,
         unsigned top_bin, BenchResult& out)
      : name_(std::move(name)), cfg_(cfg), pop_(std::move(pop)), pairs_(std::move(pairs_by_bin_flat)), top_(top_bin), out_(out) {}

  void run() {
    for (OpKind op : fuzz::all_ops)
      for (unsigned b = 0; b <= top_; ++b) run_one(op, b);
  }

  void warm_up() {
    auto until = Clock::now() + std::chrono::milliseconds(20);
    S s;
    while (Clock::now() < until) {
      for (int i = 0; i < 64; ++i) s = Ops<S>::push(s, i);
      while (s.size() > 0) s = Ops<S>::pop(s)->second;
    }
  }

 private:
  void note(std::string what) { out_.notes.push_back(name_ + " " + std::move(what)); }

  // Unary inputs whose result falls in bin b.
  std::vector<std::size_t> unary_inputs(OpKind op, unsigned b) const {
    std::vector<std::size_t> in;
    for (std::size_t i = 0; i < pop_.size() && in.size() < cfg_.per_bin; ++i) {
      std::size_t n = length_of(pop_[i]);
      bool grow = op == OpKind::Push || op == OpKind::Inject;
      if (!grow && n == 0) continue;
      if (bin_of(grow ? n + 1 : n - 1) == b) in.push_back(i);
    }
    return in;
  }

  void run_one(OpKind op, unsigned b) {
    BenchRecord rec{name_, op, b, 0, 0, 0};
    std::vector<std::uint64_t> lengths;
    Val v = 7;
    if (op == OpKind::Concat) {
      std::vector<std::pair<const S*, const S*>> in;
      for (auto [i, j] : pairs_)
        if (bin_of(length_of(pop_[i]) + length_of(pop_[j])) == b && in.size() < cfg_.per_bin) in.emplace_back(&pop_[i], &pop_[j]);
      if (in.empty()) {
        note("concat: no operand pair reaches bin " + std::to_string(b));
        return;
      }
      for (auto& [x, y] : in) lengths.push_back(length_of(*x) + length_of(*y));
      auto f = [](const std::pair<const S*, const S*>& p) { return Ops<S>::concat(*p.first, *p.second); };
      rec.work_counter = max_work(in, f);
      rec.nanos_per_op = measure(in, f, cfg_.replays, cfg_.min_batch_ns);
      S r = f(in.front());
      if (length_of(r) != lengths.front()) note("concat: spot check failed in bin " + std::to_string(b));
    } else {
      std::vector<const S*> in;
      for (std::size_t i : unary_inputs(op, b)) in.push_back(&pop_[i]);
      if (in.empty()) {
        note(std::string(fuzz::op_name(op)) + ": no input reaches bin " + std::to_string(b));
        return;
      }
      bool grow = op == OpKind::Push || op == OpKind::Inject;
      for (const S* s : in) lengths.push_back(grow ? length_of(*s) + 1 : length_of(*s) - 1);
      auto check = [&](std::size_t got) {
        if (got != lengths.front()) note(std::string(fuzz::op_name(op)) + ": spot check failed in bin " + std::to_string(b));
      };
      switch (op) {
        case OpKind::Push: {
          auto f = [v](const S* s) { return Ops<S>::push(*s, v); };
          rec.work_counter = max_work(in, f);
          rec.nanos_per_op = measure(in, f, cfg_.replays, cfg_.min_batch_ns);
          check(length_of(f(in.front())));
          break;
        }
        case OpKind::Inject: {
          auto f = [v](const S* s) { return Ops<S>::inject(*s, v); };
          rec.work_counter = max_work(in, f);
          rec.nanos_per_op = measure(in, f, cfg_.replays, cfg_.min_batch_ns);
          check(length_of(f(in.front())));
          break;
        }
        case OpKind::Pop: {
          auto f = [](const S* s) { return Ops<S>::pop(*s); };
          rec.work_counter = max_work(in, f);
          rec.nanos_per_op = measure(in, f, cfg_.replays, cfg_.min_batch_ns);
          check(length_of(f(in.front())->second));
          break;
        }
        case OpKind::Eject: {
          auto f = [](const S* s) { return Ops<S>::eject(*s); };
          rec.work_counter = max_work(in, f);
          rec.nanos_per_op = measure(in, f, cfg_.replays, cfg_.min_batch_ns);
          check(length_of(f(in.front())->first));
          break;
        }
        case OpKind::Concat: break;
      }
    }
    rec.length = median_length(lengths);
    out_.records.push_back(std::move(rec));
  }

  std::string name_;
  const BenchConfig& cfg_;
  std::vector<S> pop_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
  unsigned top_;
  BenchResult& out_;
};

// The first inhabitant of a bin sits on its lower end, so that pop and eject
// inputs exist for every bin; the others are uniform within the bin.
std::uint64_t draw_length(unsigned b, unsigned i, fuzz::SplitMix64& rng) {
  if (b == 0) return 0;
  std::uint64_t lo = std::uint64_t(1) << (b - 1);
  return i == 0 ? lo : lo + rng.below(lo);
}

// Per bin, per_bin target lengths drawn uniformly from the bin, built by
// extending the next shorter inhabitant so that construction is linear in
// the largest length.
template <class S>
std::vector<S> grow_population(unsigned top_bin, unsigned per_bin, fuzz::SplitMix64& rng) {
  std::vector<std::uint64_t> target;
  for (unsigned b = 0; b <= top_bin; ++b)
    for (unsigned i = 0; i < per_bin; ++i)
      target.push_back(draw_length(b, i, rng));
  // Sorting keeps bins grouped in order since the bins themselves ascend.
  std::sort(target.begin(), target.end());
  std::vector<S> out;
  out.reserve(target.size());
  S cur;
  for (std::uint64_t n : target) {
    while (length_of(cur) < n) cur = Ops<S>::push(cur, Val(length_of(cur)));
    out.push_back(cur);
  }
  return out;
}

template <>
std::vector<OracleSeq<Val>> grow_population<OracleSeq<Val>>(unsigned top_bin, unsigned per_bin, fuzz::SplitMix64& rng) {
  std::vector<OracleSeq<Val>> out;
  for (unsigned b = 0; b <= top_bin; ++b)
    for (unsigned i = 0; i < per_bin; ++i) {
      std::uint64_t n = draw_length(b, i, rng);
      std::vector<Val> xs(n);
      for (std::uint64_t k = 0; k < n; ++k) xs[k] = Val(k);
      out.emplace_back(std::move(xs));
    }
  return out;
}

// Concat operands by result bin: (empty, empty), (length 1, empty), then
// random pairs drawn from one bin.
std::vector<std::pair<std::size_t, std::size_t>> same_bin_pairs(unsigned top_bin, unsigned per_bin, fuzz::SplitMix64& rng) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (unsigned i = 0; i < per_bin; ++i) out.emplace_back(i, i);
  if (top_bin >= 1)
    for (unsigned i = 0; i < per_bin; ++i) out.emplace_back(per_bin + i, 0);
  for (unsigned b = 2; b <= top_bin; ++b) {
    std::size_t base = std::size_t(b - 1) * per_bin;
    for (unsigned i = 0; i < per_bin; ++i) out.emplace_back(base + rng.below(per_bin), base + rng.below(per_bin));
  }
  return out;
}

}  // namespace

unsigned bin_of(std::uint64_t n) noexcept { return n == 0 ? 0 : unsigned(std::bit_width(n)); }

void check_config(const BenchConfig& cfg) {
  if (cfg.max_log2 < 1) throw std::domain_error("bench: max_log2 must be at least 1");
  if (cfg.max_log2 > 62) throw std::domain_error("bench: max_log2 above 62");
  if (cfg.per_bin < 1) throw std::domain_error("bench: per_bin must be at least 1");
  if (cfg.replays < 1) throw std::domain_error("bench: replays must be at least 1");
  for (const auto& s : cfg.structures)
    if (s != "cadeque" && s != "deque" && s != "list" && s != "oracle") throw std::domain_error("bench: unknown structure '" + s + "'");
}

Plan plan_population(unsigned max_log2, unsigned per_bin, std::uint64_t seed) {
  if (max_log2 < 1 || per_bin < 1) throw std::domain_error("plan_population: max_log2 and per_bin must be positive");
  if (max_log2 > 62) throw std::domain_error("plan_population: max_log2 above 62");
  fuzz::SplitMix64 rng(seed);
  Plan p;
  p.max_log2 = max_log2;
  p.per_bin = per_bin;
  p.steps.reserve(std::size_t(max_log2 + 1) * per_bin);
  auto len = [&](std::size_t i) { return p.steps[i].length; };
  for (unsigned b = 0; b <= max_log2; ++b) {
    const std::size_t start = std::size_t(b) * per_bin, prev = start - per_bin;
    for (unsigned i = 0; i < per_bin; ++i) {
      PlanStep st{b, PlanOp::Empty};
      if (b == 1) {
        st.op = PlanOp::Push;
        st.a = i;
        st.value = Val(rng.below(1 << 20));
        st.length = 1;
      } else if (b >= 2) {
        bool found = false;
        for (int tries = 0; tries < 64 && !found; ++tries) {
          double u = rng.unit();
          if (i > 0 && u < 0.3) {
            st.op = u < 0.15 ? PlanOp::Push : PlanOp::Inject;
            st.a = start + rng.below(i);
            st.value = Val(rng.below(1 << 20));
            st.length = len(st.a) + 1;
          } else {
            st.op = PlanOp::Concat;
            st.a = prev + rng.below(per_bin);
            st.b = rng.below(start);
            st.length = len(st.a) + len(st.b);
          }
          found = bin_of(st.length) == b;
        }
        if (!found) {
          // Two inhabitants of bin b - 1 always add up to a length in bin b.
          st.op = PlanOp::Concat;
          st.a = prev + rng.below(per_bin);
          st.b = prev + rng.below(per_bin);
          st.length = len(st.a) + len(st.b);
        }
      }
      p.steps.push_back(st);
    }
  }
  return p;
}

BenchResult run_bench(const BenchConfig& cfg) {
  check_config(cfg);
  BenchResult out;
  Plan plan = plan_population(cfg.max_log2, cfg.per_bin, cfg.seed);
  out.plan_operations = plan.operations();
  const unsigned linear_top = std::min(cfg.max_log2, cfg.linear_cap_bin);

  for (const std::string& name : cfg.structures) {
    fuzz::SplitMix64 rng(cfg.seed ^ std::hash<std::string>{}(name));
    if (name == "cadeque") {
      using C = Cadeque<Val>;
      std::vector<C> pop;
      pop.reserve(plan.steps.size());
      for (const PlanStep& st : plan.steps) {
        switch (st.op) {
          case PlanOp::Empty: pop.emplace_back(); break;
          case PlanOp::Push: pop.push_back(pop[st.a].push(st.value)); break;
          case PlanOp::Inject: pop.push_back(pop[st.a].inject(st.value)); break;
          case PlanOp::Concat: pop.push_back(C::concat(pop[st.a], pop[st.b])); break;
        }
        if (pop.back().size() != st.length || bin_of(st.length) != st.bin) out.notes.push_back("cadeque: plan step landed outside its bin");
      }
      auto pairs = same_bin_pairs(cfg.max_log2, cfg.per_bin, rng);
      Runner<C> r("cadeque", cfg, std::move(pop), std::move(pairs), cfg.max_log2, out);
      r.warm_up();
      r.run();
    } else if (name == "deque") {
      auto pop = grow_population<Deque<Val>>(cfg.max_log2, cfg.per_bin, rng);
      auto pairs = same_bin_pairs(cfg.max_log2, cfg.per_bin, rng);
      // Concat is linear for this structure: keep pairs whose result stays
      // within the cap.
      std::erase_if(pairs, [&](auto p) { return bin_of(pop[p.first].size() + pop[p.second].size()) > linear_top; });
      Runner<Deque<Val>> r("deque", cfg, std::move(pop), std::move(pairs), cfg.max_log2, out);
      r.warm_up();
      r.run();
    } else if (name == "list") {
      auto pop = grow_population<List>(linear_top, cfg.per_bin, rng);
      auto pairs = same_bin_pairs(linear_top, cfg.per_bin, rng);
      Runner<List> r("list", cfg, std::move(pop), std::move(pairs), linear_top, out);
      r.warm_up();
      r.run();
    } else if (name == "oracle") {
      auto pop = grow_population<OracleSeq<Val>>(linear_top, cfg.per_bin, rng);
      auto pairs = same_bin_pairs(linear_top, cfg.per_bin, rng);
      Runner<OracleSeq<Val>> r("oracle", cfg, std::move(pop), std::move(pairs), linear_top, out);
      r.warm_up();
      r.run();
    }
  }
  return out;
}

void write_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << csv_header << '\n';
  for (const auto& r : records)
    out << r.structure << ',' << fuzz::op_name(r.op) << ',' << r.bin << ',' << r.length << ',' << std::fixed << std::setprecision(2)
        << r.nanos_per_op << ',' << r.work_counter << '\n';
}

}  // namespace ktdeque::bench
