#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

// Seeded differential testing of the deques against OracleSeq.
namespace ktdeque::fuzz {

// SplitMix64 (Steele, Lea, Flood). split() derives an independent stream.
class SplitMix64 {
 public:
  static constexpr std::string_view id = "splitmix64";

  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n) noexcept;
  // Uniform in [0, 1) with 53 bits.
  double unit() noexcept { return double(next() >> 11) * 0x1.0p-53; }
  SplitMix64 split() noexcept { return SplitMix64(next()); }

 private:
  std::uint64_t state_;
};

enum class OpKind : std::uint8_t { Push, Pop, Inject, Eject, Concat };
inline constexpr std::array<OpKind, 5> all_ops{OpKind::Push, OpKind::Pop, OpKind::Inject, OpKind::Eject, OpKind::Concat};
std::string_view op_name(OpKind k) noexcept;

// Every step appends exactly one version to the pool, so step i may refer to
// versions 0..i. Version 0 is the empty sequence. A pop or eject on an empty
// operand appends the operand unchanged.
struct OpStep {
  OpKind kind;
  std::size_t a;
  std::size_t b;  // second operand of concat, else 0
  std::int64_t value;  // payload of push and inject, else 0
};

struct Scenario {
  std::uint64_t seed = 0;
  std::vector<OpStep> steps;
};

struct ScenarioConfig {
  std::size_t steps = 100;
  double concat_fraction = 0.1;
  std::int64_t value_range = 1 << 20;
  // Concat operands are chosen so the result stays at or below this length;
  // when a few random draws all overshoot the right operand is version 0.
  std::size_t max_len = std::size_t(1) << 14;
  // Probability that an operand is the most recent version rather than a
  // uniformly drawn one.
  double recent_bias = 0.75;
  // Relative weights of push, pop, inject, eject among non-concat steps.
  std::array<double, 4> op_weights{1, 1, 1, 1};
};

// Throws std::domain_error on a fraction or bias outside [0, 1], a
// non-positive value range, a zero max_len, or negative or all-zero op
// weights.
Scenario gen_scenario(std::uint64_t seed, const ScenarioConfig& cfg);

enum class Target : std::uint8_t { Cadeque, Deque };

struct CheckOptions {
  std::size_t full_compare_cap = std::size_t(1) << 14;
  std::size_t sample_k = 32;  // front and back elements compared above the cap
};

struct Discrepancy {
  std::size_t step;
  std::string what;
  std::uint64_t expected_digest;
  std::uint64_t actual_digest;
  std::size_t expected_length;
  std::size_t actual_length;
};

struct Report {
  std::uint64_t seed = 0;
  std::size_t steps_run = 0;
  std::vector<Discrepancy> discrepancies;
  std::size_t validator_failures = 0;
  std::vector<std::string> validator_messages;  // first few only
  std::size_t persistence_failures = 0;
  std::size_t fringe_checks = 0;
  std::array<std::uint64_t, 5> max_work{};  // indexed by OpKind
  std::size_t max_length = 0;

  bool ok() const noexcept { return discrepancies.empty() && validator_failures == 0 && persistence_failures == 0; }
};

// Rolling hash of the values, combined with the length.
std::uint64_t digest(const std::vector<std::int64_t>& xs);

// Deque targets reject scenarios containing concat with std::domain_error.
Report run_differential(const Scenario& s, Target target, const CheckOptions& opts = {});

struct BatchConfig {
  std::size_t seeds = 1000;
  std::uint64_t first_seed = 1;
  ScenarioConfig scenario;
  Target target = Target::Cadeque;
  CheckOptions check;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct BatchReport {
  std::string rng{SplitMix64::id};
  Target target = Target::Cadeque;
  std::size_t scenarios = 0;
  std::size_t steps_run = 0;
  std::size_t validator_failures = 0;
  std::size_t persistence_failures = 0;
  std::size_t fringe_checks = 0;
  std::size_t max_length = 0;
  std::array<std::uint64_t, 5> max_work{};
  std::vector<std::pair<std::uint64_t, Discrepancy>> discrepancies;  // (seed, discrepancy), first few
  std::size_t discrepancy_count = 0;
  std::vector<std::string> validator_messages;
  double seconds = 0;

  bool ok() const noexcept { return discrepancy_count == 0 && validator_failures == 0 && persistence_failures == 0; }
};

BatchReport run_batch(const BatchConfig& cfg);

std::string to_json(const BatchReport& r, int indent = 2);

}  // namespace ktdeque::fuzz
