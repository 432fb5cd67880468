#include <doctest.h>

#include <stdexcept>

#include "ktdeque/fuzz.hpp"

using namespace ktdeque::fuzz;

namespace {

std::size_t count_concat(const Scenario& s) {
  std::size_t n = 0;
  for (const auto& st : s.steps) n += st.kind == OpKind::Concat;
  return n;
}

}  // namespace

TEST_CASE("splitmix64 reference outputs") {
  // First outputs for seed 0 from the published reference implementation.
  SplitMix64 r(0);
  CHECK(r.next() == 0xe220a8397b1dcdafULL);
  CHECK(r.next() == 0x6e789e6aa1b965f4ULL);
  CHECK(r.next() == 0x06c45d188009454fULL);
}

TEST_CASE("scenario generation") {
  ScenarioConfig cfg;
  cfg.steps = 0;
  CHECK(gen_scenario(1, cfg).steps.empty());

  cfg.steps = 100;
  auto a = gen_scenario(42, cfg), b = gen_scenario(42, cfg);
  REQUIRE(a.steps.size() == 100);
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    CHECK(a.steps[i].kind == b.steps[i].kind);
    CHECK(a.steps[i].a == b.steps[i].a);
    CHECK(a.steps[i].b == b.steps[i].b);
    CHECK(a.steps[i].value == b.steps[i].value);
    CHECK(a.steps[i].a <= i);
    CHECK(a.steps[i].b <= i);
  }
  MESSAGE("concat steps for seed 42: " << count_concat(a));
  CHECK(count_concat(a) == 14);

  std::size_t total = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) total += count_concat(gen_scenario(seed, cfg));
  CHECK(total > 1600);
  CHECK(total < 2400);
}

TEST_CASE("invalid configurations") {
  ScenarioConfig cfg;
  cfg.concat_fraction = 1.5;
  CHECK_THROWS_AS(gen_scenario(1, cfg), std::domain_error);
  cfg = {};
  cfg.value_range = 0;
  CHECK_THROWS_AS(gen_scenario(1, cfg), std::domain_error);
  cfg = {};
  cfg.max_len = 0;
  CHECK_THROWS_AS(gen_scenario(1, cfg), std::domain_error);
  cfg = {};
  cfg.op_weights = {0, 0, 0, 0};
  CHECK_THROWS_AS(gen_scenario(1, cfg), std::domain_error);
}

TEST_CASE("push-heavy scenarios reach deeper structures") {
  BatchConfig cfg;
  cfg.seeds = 8;
  cfg.scenario.steps = 3000;
  cfg.scenario.recent_bias = 1.0;
  cfg.scenario.op_weights = {3, 1, 3, 1};
  cfg.scenario.concat_fraction = 0;
  cfg.target = Target::Deque;
  auto d = run_batch(cfg);
  CHECK(d.ok());
  CHECK(d.max_length > 1000);

  cfg.seeds = 20;
  cfg.scenario.steps = 400;
  cfg.scenario.concat_fraction = 0.25;
  cfg.scenario.recent_bias = 0.9;
  cfg.target = Target::Cadeque;
  auto c = run_batch(cfg);
  CHECK(c.ok());
  MESSAGE("cadeque push-heavy max length " << c.max_length);
  CHECK(c.max_length > 2000);
}

TEST_CASE("hand-written scenarios") {
  Scenario empty;
  auto r0 = run_differential(empty, Target::Cadeque);
  CHECK(r0.steps_run == 0);
  CHECK(r0.ok());

  Scenario s;
  s.steps = {{OpKind::Push, 0, 0, 1}, {OpKind::Push, 1, 0, 2}, {OpKind::Pop, 2, 0, 0}};
  for (Target t : {Target::Cadeque, Target::Deque}) {
    auto r = run_differential(s, t);
    CHECK(r.steps_run == 3);
    CHECK(r.ok());
  }
  s.steps.push_back({OpKind::Concat, 3, 2, 0});
  CHECK(run_differential(s, Target::Cadeque).ok());
  CHECK_THROWS_AS(run_differential(s, Target::Deque), std::domain_error);
}

TEST_CASE("small batches are clean and reproducible") {
  BatchConfig cfg;
  cfg.seeds = 40;
  cfg.scenario.steps = 200;
  auto a = run_batch(cfg);
  CHECK(a.ok());
  CHECK(a.steps_run == 8000);
  cfg.threads = 1;
  auto b = run_batch(cfg);
  CHECK(a.max_work == b.max_work);
  CHECK(a.max_length == b.max_length);

  cfg.target = Target::Deque;
  cfg.scenario.concat_fraction = 0;
  auto d = run_batch(cfg);
  CHECK(d.ok());
  CHECK(to_json(d).find("\"rng\": \"splitmix64\"") != std::string::npos);
}
