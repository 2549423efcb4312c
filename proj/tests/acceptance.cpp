// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include "numlab/closure.hpp"
#include "numlab/fuzz.hpp"
#include "numlab/json_io.hpp"
#include "numlab/market.hpp"
#include "numlab/oracle.hpp"
#include "numlab/prooflab.hpp"
#include "numlab/verify.hpp"

using namespace numlab;

namespace {

struct Verdict {
  bool passed = false;
  std::string detail;
};

Verdict pass(std::string d) { return {true, std::move(d)}; }
Verdict fail(std::string d) { return {false, std::move(d)}; }

RVector vec(std::initializer_list<const char*> xs) {
  RVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (const char* x : xs) v[i++] = parse_rational(x);
  return v;
}

std::vector<fuzz::Instance> fuzz_corpus() {
  std::vector<fuzz::Instance> out;
  for (std::uint64_t i = 0; i < 1000; ++i) out.push_back(fuzz::generate(1, i, fuzz::GeneratorConfig{}));
  return out;
}

// Theorem cross-validation on 1000 instances at seed 1.
Verdict ac1() {
  fuzz::Options opt;
  opt.seed = 1;
  opt.count = 1000;
  opt.jobs = fuzz::jobs_from_env(std::max(1u, std::thread::hardware_concurrency()));
  const auto start = std::chrono::steady_clock::now();
  const auto s = fuzz::summarize(fuzz::run(opt));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream d;
  d << s.instances << " instances, " << s.feasible << " feasible, " << s.infeasible << " infeasible, "
    << s.inconsistent << " inconsistent, " << s.unresolved << " unresolved, " << s.errors << " errors, " << secs
    << " s";
  const bool ok = s.instances == 1000 && s.inconsistent == 0 && s.errors == 0 && s.unresolved * 20 <= s.infeasible &&
                  secs < 120.0;
  return {ok, d.str()};
}

// Every closure iterate generator lies in K_q, re-checked by the solver-free verifier.
Verdict ac2(const std::vector<fuzz::Instance>& corpus) {
  std::size_t feasible = 0, generators = 0;
  for (const auto& inst : corpus) {
    const auto result = cs_closure(inst.g, inst.body);
    const auto* b = std::get_if<BoundedClosure<Rational>>(&result.verdict);
    if (!b) continue;
    ++feasible;
    for (const auto& it : b->iterates) {
      if (!it.rays().empty()) return fail("instance " + std::to_string(inst.index) + ": ray in a feasible run");
      for (const auto& h : it.points()) {
        ++generators;
        if (!in_superset_K(b->certificate.q, inst.g, h)) {
          return fail("instance " + std::to_string(inst.index) + ": iterate generator outside K_q");
        }
      }
    }
    io::Json report{{"instance", io::encode_instance(inst.g, inst.body)}};
    report.update(io::encode(result));
    if (!verify::verify_report(report).ok()) {
      return fail("instance " + std::to_string(inst.index) + ": report does not re-verify");
    }
  }
  return pass(std::to_string(feasible) + " feasible instances, " + std::to_string(generators) +
              " iterate generators in K_q");
}

// Measure round trip and the sup identity.
Verdict ac3(const std::vector<fuzz::Instance>& corpus) {
  fuzz::SplitMix64 rng(2024);
  std::size_t with_zeros = 0;
  for (int t = 0; t < 500; ++t) {
    const auto n = static_cast<Eigen::Index>(1 + rng.below(6));
    RVector q(n), g(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      q[i] = Rational(static_cast<long>(1 + rng.below(16)), static_cast<long>(1 + rng.below(16)));
      g[i] = rng.below(3) == 0 ? Rational(0)
                               : Rational(static_cast<long>(1 + rng.below(48)), static_cast<long>(1 + rng.below(16)));
    }
    q /= q.sum();
    if (is_zero(g)) g[0] = 1;
    if ((g.array() == Rational(0)).any()) ++with_zeros;
    const auto mu = measure_from_certificate(q, g);
    if (!same(certificate_from_measure(mu, g), q)) return fail("round trip failed at pair " + std::to_string(t));
  }
  std::size_t sup_checks = 0;
  for (const auto& inst : corpus) {
    const auto out = is_numeraire(inst.g, inst.body);
    const auto* cert = std::get_if<NumeraireCertificate<Rational>>(&out);
    if (!cert) continue;
    ++sup_checks;
    if (!verify_certificate(inst.g, inst.body, cert->q)) {
      return fail("instance " + std::to_string(inst.index) + ": certificate invalid");
    }
    if (!check_sup_identity(measure_from_certificate(cert->q, inst.g), inst.g, inst.body)) {
      return fail("instance " + std::to_string(inst.index) + ": sup identity fails");
    }
  }
  return pass("500 round trips (" + std::to_string(with_zeros) + " with zero atoms), " + std::to_string(sup_checks) +
              " sup identities");
}

// The constrained market: grids A and B, and the threshold sweep.
Verdict ac4() {
  using namespace market;
  const auto model = MarketModel::standard();
  const RVector& xi = model.xi();
  const auto a = build_scenario(model, ConstraintGrid({0, Rational(1, 25), Rational(1, 4), 1}));
  const auto out_a = is_numeraire(a.g, a.body);
  const auto* cert = std::get_if<NumeraireCertificate<Rational>>(&out_a);
  if (!cert || !verify_certificate(a.g, a.body, cert->q)) return fail("grid A is not certified");
  if (verify_theorem(a.g, a.body).status != Consistency::Consistent) return fail("grid A inconsistent");

  const auto b = build_scenario(model, ConstraintGrid({0, Rational(1, 100), Rational(1, 25), Rational(1, 4), 1}));
  const auto out_b = is_numeraire(b.g, b.body);
  const auto* inf = std::get_if<NumeraireInfeasible<Rational>>(&out_b);
  if (!inf || !verify_infeasibility(b.g, b.body, inf->farkas)) return fail("grid B lacks a Farkas certificate");
  const auto report = verify_theorem(b.g, b.body);
  const auto* u = std::get_if<UnboundedClosure<Rational>>(&report.result.verdict);
  if (!u || !verify_witness(b.g, b.body, u->chain).ok) return fail("grid B closure is not certified unbounded");
  const RVector expected = RVector(Rational(11, 100) * xi) - RVector::Constant(3, Rational(1, 100));
  // Positive multiple: r = c * expected with c > 0.
  const Rational c = u->ray()[2] / expected[2];
  if (!(c > 0) || !same(u->ray(), RVector(c * expected))) return fail("grid B ray is not f_{1/100} - 1");

  const Rational gamma_star = threshold_gamma(model.xi_min());
  if (gamma_star != Rational(1, 81)) return fail("threshold is " + to_string(gamma_star));
  std::string flips;
  for (const auto& row : threshold_sweep(model, reciprocal_squares(2, 12))) {
    if (row.lp_feasible != (row.gamma_min > gamma_star)) {
      return fail("sweep verdict at gamma_min = " + to_string(row.gamma_min) + " is on the wrong side");
    }
    if (row.certificate) {
      const auto s = build_scenario(model, ConstraintGrid({row.gamma_min, Rational(1, 4), 1}));
      if (!verify_certificate(s.g, s.body, *row.certificate)) {
        return fail("sweep certificate at gamma_min = " + to_string(row.gamma_min) + " invalid");
      }
    }
    flips += row.lp_feasible ? '+' : '-';
  }
  return pass("grid A certified, grid B Farkas + ray " + to_string(c) + "*(f_{1/100} - 1), sweep k=2..12 " + flips +
              " flips at 1/81");
}

// (1+n) f_n - n = (1 + sqrt(1+n)) xi, evaluated from the defining formula.
Verdict ac5() {
  const RVector xi = vec({"1/10", "1", "10"});
  for (long n : {0L, 3L, 8L, 15L, 24L}) {
    const auto root = exact_sqrt(Rational(1 + n));
    if (!root) return fail("1 + " + std::to_string(n) + " is not a square");
    const RVector f = RVector::Constant(3, Rational(n, 1 + n)) + (Rational(1, 1 + n) + Rational(1) / *root) * xi;
    const RVector lhs = Rational(1 + n) * f - RVector::Constant(3, Rational(n));
    if (!same(lhs, RVector((1 + *root) * xi))) return fail("identity fails at n = " + std::to_string(n));
    const auto pair = market::divergent_sequence(n, xi);
    if (!same(pair.f, f) || !same(pair.f_prime, lhs)) return fail("library disagrees at n = " + std::to_string(n));
  }
  return pass("n in {0, 3, 8, 15, 24}");
}

// The proof pipeline on every feasible instance with a bounded fixed point.
Verdict ac6(const std::vector<fuzz::Instance>& corpus) {
  std::size_t runs = 0;
  for (const auto& inst : corpus) {
    const auto result = cs_closure(inst.g, inst.body);
    const auto* b = std::get_if<BoundedClosure<Rational>>(&result.verdict);
    if (!b || !b->fixed_point_reached) continue;
    ++runs;
    const auto report = run_pipeline(inst.g, inst.body);
    if (!report.passed()) {
      return fail("instance " + std::to_string(inst.index) + " fails at " + report.first_failure.value_or("?"));
    }
    if (!verify_certificate(inst.g, inst.body, *report.pulled_back_q)) {
      return fail("instance " + std::to_string(inst.index) + ": pulled-back q is not a certificate");
    }
  }
  return pass(std::to_string(runs) + " pipelines, all steps passed");
}

// Simplex grid search versus the LP on 200 instances with at most 3 atoms.
Verdict ac7() {
  fuzz::GeneratorConfig cfg;
  cfg.max_atoms = 3;
  std::size_t decided = 0, margin = 0, margin_disagree = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const auto inst = fuzz::generate(7, i, cfg);
    const auto c = oracle::compare(inst.g, inst.body, 128, Rational(1, 64));
    if (c.lp_feasible && !c.outside_margin) {
      ++margin;
      if (!c.agree) ++margin_disagree;
      continue;
    }
    ++decided;
    if (!c.agree) return fail("instance " + std::to_string(i) + " disagrees with epsilon " + to_string(c.epsilon));
  }
  return pass(std::to_string(decided) + " decided instances agree; " + std::to_string(margin) +
              " inside the margin (" + std::to_string(margin_disagree) + " grid misses reported)");
}

// Finite grids of the market family: g = 1 maximal implies numeraire.
Verdict ac8() {
  using namespace market;
  std::vector<MarketModel> models{
      MarketModel::standard(),
      MarketModel(FiniteProbSpace<Rational>(vec({"1/2", "1/4", "1/4"})), vec({"1/5", "2", "3"})),
      MarketModel(FiniteProbSpace<Rational>(vec({"1/10", "9/10"})), vec({"1/20", "20"})),
      MarketModel(FiniteProbSpace<Rational>::uniform(4), vec({"1/3", "1/2", "4", "7"})),
  };
  std::vector<Rational> pool;
  for (long den = 1; den <= 12; ++den) {
    for (long num = 1; num <= den; ++num) {
      const Rational s(num, den);
      if (numerator(s) == num) pool.push_back(s * s);
    }
  }
  fuzz::SplitMix64 rng(8);
  std::size_t maximal = 0, instances = 0;
  for (const auto& model : models) {
    for (int t = 0; t < 100; ++t) {
      std::vector<Rational> gammas{0};
      for (std::size_t k = 0, m = 1 + rng.below(4); k < m; ++k) gammas.push_back(pool[rng.below(pool.size())]);
      const auto s = build_scenario(model, ConstraintGrid(gammas));
      ++instances;
      if (!is_maximal(s.g, s.body).maximal) continue;
      ++maximal;
      if (!std::holds_alternative<NumeraireCertificate<Rational>>(is_numeraire(s.g, s.body))) {
        std::string grid;
        for (const auto& gm : s.grid.gammas()) grid += to_string(gm) + " ";
        return fail("bounded, maximal and not a numeraire on grid { " + grid + "}");
      }
    }
  }
  return pass(std::to_string(instances) + " finite grids, " + std::to_string(maximal) +
              " with 1 maximal, all numeraire-feasible; the continuum counterexample has no finite instance");
}

}  // namespace

int main() {
  const auto corpus = fuzz_corpus();
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"AC1 theorem cross-validation", ac1},
      {"AC2 easy-direction containment", [&] { return ac2(corpus); }},
      {"AC3 measure round trip", [&] { return ac3(corpus); }},
      {"AC4 constrained market", ac4},
      {"AC5 divergence identity", ac5},
      {"AC6 proof pipeline", [&] { return ac6(corpus); }},
      {"AC7 oracle agreement", ac7},
      {"AC8 finite-family statement", ac8},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = fail(std::string("exception: ") + e.what());
    }
    std::cout << (v.passed ? "PASS " : "FAIL ") << name << ": " << v.detail << std::endl;
    failures += v.passed ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
