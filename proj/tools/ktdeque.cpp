#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ktdeque/bench.hpp"
#include "ktdeque/fuzz.hpp"

namespace {

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string part; std::getline(in, part, ',');)
    if (!part.empty()) out.push_back(part);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace ktdeque;
  CLI::App app{"Persistent deques: differential fuzzing and benchmarks"};
  app.require_subcommand(1);

  fuzz::BatchConfig fc;
  std::string target = "cadeque";
  std::string report_path;
  auto* fz = app.add_subcommand("fuzz", "run seeded differential scenarios against the oracle");
  fz->add_option("--seeds", fc.seeds, "number of scenarios")->capture_default_str();
  fz->add_option("--first-seed", fc.first_seed, "seed of the first scenario")->capture_default_str();
  fz->add_option("--steps", fc.scenario.steps, "steps per scenario")->capture_default_str();
  fz->add_option("--concat-frac", fc.scenario.concat_fraction, "fraction of concat steps")->capture_default_str();
  fz->add_option("--max-len", fc.scenario.max_len, "concat results stay at or below this length")->capture_default_str();
  fz->add_option("--full-compare-cap", fc.check.full_compare_cap, "longest sequence compared element by element")->capture_default_str();
  fz->add_option("--target", target, "cadeque or deque")->check(CLI::IsMember({"cadeque", "deque"}))->capture_default_str();
  fz->add_option("--threads", fc.threads, "worker threads, 0 for all cores")->capture_default_str();
  fz->add_option("--report", report_path, "write the JSON report here");

  bench::BenchConfig bc;
  std::string structures = "cadeque,deque,list";
  std::string out_path = "bench.csv";
  bool plan_only = false;
  auto* bn = app.add_subcommand("bench", "time operations on binned populations and write CSV");
  bn->add_option("--max-log2", bc.max_log2, "largest bin")->capture_default_str();
  bn->add_option("--per-bin", bc.per_bin, "inhabitants per bin")->capture_default_str();
  bn->add_option("--replays", bc.replays, "timed replays per point")->capture_default_str();
  bn->add_option("--seed", bc.seed, "population seed")->capture_default_str();
  bn->add_option("--structures", structures, "comma-separated subset of cadeque,deque,list,oracle")->capture_default_str();
  bn->add_option("--linear-cap-bin", bc.linear_cap_bin, "largest bin for linear-time structures")->capture_default_str();
  bn->add_option("--out", out_path, "CSV output path")->capture_default_str();
  bn->add_flag("--plan-only", plan_only, "print the construction plan size and exit");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*fz) {
      if (target == "deque") {
        fc.target = fuzz::Target::Deque;
        if (fc.scenario.concat_fraction != 0) {
          std::cerr << "deque target: concat disabled\n";
          fc.scenario.concat_fraction = 0;
        }
      }
      auto rep = fuzz::run_batch(fc);
      std::string json = fuzz::to_json(rep);
      if (!report_path.empty()) std::ofstream(report_path) << json << '\n';
      std::cout << "scenarios=" << rep.scenarios << " steps=" << rep.steps_run << " discrepancies=" << rep.discrepancy_count
                << " validator_failures=" << rep.validator_failures << " persistence_failures=" << rep.persistence_failures
                << " seconds=" << rep.seconds << '\n';
      return rep.ok() ? 0 : 1;
    }
    bc.structures = split_commas(structures);
    bench::check_config(bc);
    if (plan_only) {
      auto plan = bench::plan_population(bc.max_log2, bc.per_bin, bc.seed);
      std::cout << "bins=" << bc.max_log2 + 1 << " per_bin=" << bc.per_bin << " operations=" << plan.operations() << '\n';
      return 0;
    }
    auto res = bench::run_bench(bc);
    std::ofstream out(out_path, std::ios::binary);
    bench::write_csv(out, res.records);
    for (const auto& n : res.notes) std::cerr << "note: " << n << '\n';
    std::cout << "plan_operations=" << res.plan_operations << " rows=" << res.records.size() << " out=" << out_path << '\n';
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
