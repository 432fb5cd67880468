#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ktdeque/fuzz.hpp"

// Binned micro-benchmarks of persistent sequence operations.
namespace ktdeque::bench {

// 0 for n = 0, otherwise floor(log2 n) + 1, so bin b >= 1 holds [2^(b-1), 2^b).
unsigned bin_of(std::uint64_t n) noexcept;

inline constexpr const char* csv_header = "structure,op,bin,length,nanos_per_op,work_counter";

struct BenchConfig {
  unsigned max_log2 = 20;
  unsigned per_bin = 50;
  unsigned replays = 1000;
  std::uint64_t seed = 1;
  std::vector<std::string> structures{"cadeque", "deque", "list"};
  // Structures with linear-time operations (deque concat, list, oracle)
  // are measured up to this bin only.
  unsigned linear_cap_bin = 16;
  // A timed batch repeats the operation until it takes at least this long.
  double min_batch_ns = 2000;
};

// Throws std::domain_error on max_log2 < 1, per_bin < 1, replays < 1, an
// unknown structure name, or max_log2 > 62.
void check_config(const BenchConfig& cfg);

enum class PlanOp : std::uint8_t { Empty, Push, Inject, Concat };

// One construction step per inhabitant. Inhabitant i is built by step i;
// bin b owns steps [b * per_bin, (b + 1) * per_bin). Bin 0 is the empty
// sequence and bin 1 a push onto it. For b >= 2 a random search draws
// either a push or inject onto an earlier inhabitant of bin b, or a concat
// of a bin b - 1 inhabitant with any earlier one, until the result length
// lands in bin b. Lengths are tracked arithmetically, so plans for bins far
// beyond what fits in memory are cheap.
struct PlanStep {
  unsigned bin;
  PlanOp op;
  std::size_t a = 0, b = 0;
  std::int64_t value = 0;
  std::uint64_t length = 0;
};

struct Plan {
  unsigned max_log2 = 0;
  unsigned per_bin = 0;
  std::vector<PlanStep> steps;
  std::size_t operations() const noexcept { return steps.size(); }
};

Plan plan_population(unsigned max_log2, unsigned per_bin, std::uint64_t seed);

struct BenchRecord {
  std::string structure;
  fuzz::OpKind op;
  unsigned bin;
  std::uint64_t length;  // median result length of the measured inputs
  double nanos_per_op;   // median over replays
  std::uint64_t work_counter;  // max over the measured inputs
};

struct BenchResult {
  std::vector<BenchRecord> records;
  std::size_t plan_operations = 0;
  std::vector<std::string> notes;  // unreachable bins, failed spot checks
};

BenchResult run_bench(const BenchConfig& cfg);

void write_csv(std::ostream& out, const std::vector<BenchRecord>& records);

}  // namespace ktdeque::bench
