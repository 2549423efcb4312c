#include "numlab/fuzz.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>

#include "numlab/prooflab.hpp"

namespace numlab::fuzz {

std::uint64_t SplitMix64::below(std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x = next();
  while (x >= limit) x = next();
  return x % bound;
}

std::uint64_t instance_seed(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 a(index);
  SplitMix64 b(seed ^ a.next());
  return b.next();
}

namespace {

Rational draw_entry(SplitMix64& rng, long max_den) {
  if (rng.below(6) == 0) return Rational(0);
  const long den = 1 + static_cast<long>(rng.below(static_cast<std::uint64_t>(max_den)));
  const long num = static_cast<long>(rng.below(static_cast<std::uint64_t>(3 * den + 1)));
  return Rational(num, den);
}

RVector draw_vector(SplitMix64& rng, Eigen::Index n, long max_den) {
  RVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = draw_entry(rng, max_den);
  return v;
}

void project_onto(RVector& v, const RVector& g) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (g[i] == 0) v[i] = 0;
  }
}

std::optional<Instance> attempt(SplitMix64& rng, std::uint64_t index, const GeneratorConfig& config) {
  const auto n = static_cast<Eigen::Index>(1 + rng.below(static_cast<std::uint64_t>(config.max_atoms)));
  const auto k = static_cast<std::size_t>(1 + rng.below(static_cast<std::uint64_t>(config.max_gens)));
  std::vector<RVector> points;
  for (std::size_t j = 0; j < k; ++j) points.push_back(draw_vector(rng, n, config.max_den));
  const auto g_index = static_cast<std::size_t>(rng.below(k));
  const RVector g = points[g_index];
  if (is_zero(g)) return std::nullopt;

  if (rng.below(2) == 0) {
    for (auto& p : points) project_onto(p, g);
  }
  std::vector<RVector> rays;
  if (rng.below(10) == 0) {
    RVector r = draw_vector(rng, n, config.max_den);
    project_onto(r, g);
    if (!is_zero(r)) rays.push_back(std::move(r));
  }
  ConvexBody<Rational> body(std::move(points), std::move(rays));
  if (detail::strict_positivity_violation(g, body)) return std::nullopt;
  return Instance{index, std::move(body), g, g_index};
}

}  // namespace

Instance generate(std::uint64_t seed, std::uint64_t index, const GeneratorConfig& config) {
  SplitMix64 rng(instance_seed(seed, index));
  for (;;) {
    if (auto inst = attempt(rng, index, config)) return std::move(*inst);
  }
}

Record evaluate(const Instance& instance, const ClosureConfig<Rational>& closure, bool run_pipeline) {
  Record rec;
  rec.index = instance.index;
  rec.atoms = instance.body.dimension();
  rec.generators = instance.body.points().size() + instance.body.rays().size();
  try {
    const auto report = verify_theorem(instance.g, instance.body, closure);
    rec.lp_feasible = report.lp_verdict == LpVerdict::Feasible;
    rec.closure = report.closure_verdict;
    rec.status = report.status;
    rec.containment = report.containment_verified;
    rec.witness = report.witness_verified;
    if (run_pipeline && rec.lp_feasible && rec.closure == ClosureVerdict::Bounded) {
      const auto proof = numlab::run_pipeline(instance.g, instance.body, closure);
      rec.pipeline_passed = proof.passed();
      rec.pipeline_failure = proof.first_failure;
    }
  } catch (const std::exception& e) {
    rec.status = Consistency::Inconsistent;
    rec.error = e.what();
  }
  return rec;
}

std::vector<Record> run(const Options& options) {
  std::vector<Record> records(options.count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < options.count; i = next++) {
      const Instance inst = generate(options.seed, i, options.generator);
      records[i] = evaluate(inst, options.closure, options.run_pipeline);
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(options.count)));
  if (jobs <= 1) {
    worker();
    return records;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return records;
}

Summary summarize(const std::vector<Record>& records) {
  Summary s;
  s.instances = records.size();
  for (const auto& r : records) {
    (r.lp_feasible ? s.feasible : s.infeasible)++;
    switch (r.status) {
      case Consistency::Consistent: ++s.consistent; break;
      case Consistency::Unresolved: ++s.unresolved; break;
      case Consistency::Inconsistent: ++s.inconsistent; break;
    }
    if (r.containment && !*r.containment) ++s.containment_failures;
    if (r.pipeline_passed) {
      ++s.pipeline_runs;
      if (!*r.pipeline_passed) ++s.pipeline_failures;
    }
    if (!r.error.empty()) ++s.errors;
  }
  return s;
}

unsigned jobs_from_env(unsigned fallback) {
  const char* raw = std::getenv("NUMERAIRE_LAB_JOBS");
  if (!raw || !*raw) return fallback;
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  if (*end != '\0' || v < 1) return fallback;
  return static_cast<unsigned>(v);
}

}  // namespace numlab::fuzz
