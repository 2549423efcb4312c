#ifndef NUMLAB_FUZZ_HPP
#define NUMLAB_FUZZ_HPP

// Random rational instances (body, g) and the cross-validation harness.
//
// Instance i of seed s is drawn from splitmix64 seeded with
// mix(s, i) = splitmix64(s ^ splitmix64(i)), so instances are independent of
// job scheduling and any single index can be replayed alone.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "numlab/closure.hpp"
#include "numlab/core.hpp"

namespace numlab::fuzz {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t state_;
};

std::uint64_t instance_seed(std::uint64_t seed, std::uint64_t index);

struct GeneratorConfig {
  int max_atoms = 6;
  int max_gens = 8;
  long max_den = 16;
};

struct Instance {
  std::uint64_t index = 0;
  ConvexBody<Rational> body;
  RVector g;
  std::size_t g_index = 0;
};

/// Deterministic in (seed, index). Entries are a/b with b <= max_den and
/// 0 <= a <= 3b; about half of the instances project the other generators
/// onto the support of g, and about one in ten carries a ray.
Instance generate(std::uint64_t seed, std::uint64_t index, const GeneratorConfig& config);

struct Record {
  std::uint64_t index = 0;
  Eigen::Index atoms = 0;
  std::size_t generators = 0;
  bool lp_feasible = false;
  ClosureVerdict closure = ClosureVerdict::Inconclusive;
  Consistency status = Consistency::Unresolved;
  std::optional<bool> containment;
  std::optional<bool> witness;
  /// Filled when the proof pipeline ran (feasible instances with a bounded closure).
  std::optional<bool> pipeline_passed;
  std::optional<std::string> pipeline_failure;
  std::string error;
};

struct Options {
  std::uint64_t seed = 1;
  std::size_t count = 100;
  GeneratorConfig generator;
  ClosureConfig<Rational> closure;
  unsigned jobs = 1;
  bool run_pipeline = false;
};

struct Summary {
  std::size_t instances = 0;
  std::size_t feasible = 0;
  std::size_t infeasible = 0;
  std::size_t consistent = 0;
  std::size_t unresolved = 0;
  std::size_t inconsistent = 0;
  std::size_t containment_failures = 0;
  std::size_t pipeline_runs = 0;
  std::size_t pipeline_failures = 0;
  std::size_t errors = 0;
};

Record evaluate(const Instance& instance, const ClosureConfig<Rational>& closure, bool run_pipeline);

/// Records ordered by instance index regardless of options.jobs.
std::vector<Record> run(const Options& options);

Summary summarize(const std::vector<Record>& records);

/// NUMERAIRE_LAB_JOBS when set to a positive integer, else the fallback.
unsigned jobs_from_env(unsigned fallback);

}  // namespace numlab::fuzz

#endif  // NUMLAB_FUZZ_HPP
