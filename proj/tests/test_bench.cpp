#include <doctest.h>

#include <set>
#include <sstream>
#include <stdexcept>

#include "ktdeque/bench.hpp"
#include "ktdeque/cadeque.hpp"

using namespace ktdeque;
using namespace ktdeque::bench;

TEST_CASE("bin boundaries") {
  CHECK(bin_of(0) == 0);
  CHECK(bin_of(1) == 1);
  CHECK(bin_of(2) == 2);
  CHECK(bin_of(3) == 2);
  CHECK(bin_of(4) == 3);
  CHECK(bin_of(std::uint64_t(1) << 19) == 20);
  CHECK(bin_of((std::uint64_t(1) << 20) - 1) == 20);
  CHECK(bin_of(std::uint64_t(1) << 39) == 40);
}

TEST_CASE("construction plans") {
  Plan small = plan_population(4, 2, 1);
  CHECK(small.operations() == 10);
  std::multiset<unsigned> bins;
  for (const auto& st : small.steps) {
    bins.insert(st.bin);
    CHECK(bin_of(st.length) == st.bin);
  }
  for (unsigned b = 0; b <= 4; ++b) CHECK(bins.count(b) == 2);

  CHECK(plan_population(40, 50, 1).operations() == 2050);
  CHECK(plan_population(20, 50, 7).operations() == 1050);
  CHECK_THROWS_AS(plan_population(0, 50, 1), std::domain_error);
  CHECK_THROWS_AS(plan_population(4, 0, 1), std::domain_error);
}

TEST_CASE("executed plan inhabitants are valid and land in their bins") {
  using C = Cadeque<std::int64_t>;
  Plan p = plan_population(14, 6, 3);
  std::vector<C> pop;
  std::set<std::uint64_t> lengths;
  for (const auto& st : p.steps) {
    switch (st.op) {
      case PlanOp::Empty: pop.emplace_back(); break;
      case PlanOp::Push: pop.push_back(pop[st.a].push(st.value)); break;
      case PlanOp::Inject: pop.push_back(pop[st.a].inject(st.value)); break;
      case PlanOp::Concat: pop.push_back(C::concat(pop[st.a], pop[st.b])); break;
    }
    CHECK(pop.back().size() == st.length);
    CHECK(pop.back().validate().empty());
    lengths.insert(st.length);
  }
  // Lengths are not all powers of two.
  CHECK(lengths.size() > 20);
}

TEST_CASE("configuration checks") {
  BenchConfig cfg;
  cfg.max_log2 = 0;
  CHECK_THROWS_AS(check_config(cfg), std::domain_error);
  cfg = {};
  cfg.structures = {"cadeque", "rope"};
  CHECK_THROWS_AS(check_config(cfg), std::domain_error);
  cfg = {};
  cfg.replays = 0;
  CHECK_THROWS_AS(check_config(cfg), std::domain_error);
  CHECK_NOTHROW(check_config(BenchConfig{}));
}

TEST_CASE("small benchmark run and CSV layout") {
  BenchConfig cfg;
  cfg.max_log2 = 6;
  cfg.per_bin = 4;
  cfg.replays = 3;
  cfg.min_batch_ns = 100;
  cfg.structures = {"cadeque", "deque", "list", "oracle"};
  auto res = run_bench(cfg);
  CHECK(res.plan_operations == 28);
  // push and inject never produce an empty result, so their bin-0 rows are absent.
  CHECK(res.records.size() == 4 * (5 * 7 - 2));
  for (const auto& r : res.records) {
    CHECK(bin_of(r.length) == r.bin);
    CHECK(r.nanos_per_op >= 0);
  }
  std::ostringstream out;
  write_csv(out, res.records);
  std::string csv = out.str();
  CHECK(csv.rfind("structure,op,bin,length,nanos_per_op,work_counter\n", 0) == 0);
  CHECK(csv.find('\r') == std::string::npos);
  CHECK(csv.find("\ncadeque,concat,6,") != std::string::npos);
  CHECK(csv.find("\nlist,push,1,1,") != std::string::npos);
}
