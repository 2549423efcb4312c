#ifndef NUMLAB_PROOFLAB_HPP
#define NUMLAB_PROOFLAB_HPP

/**
 * Finite re-enactment of the sufficiency argument: if the short-sale closure
 * of C is bounded then g is a numéraire.
 *
 *   1. Rescale so that g becomes the constant 1.
 *   2. Pass to the solid hull S of the closure and check 1 is maximal in S.
 *   3. Form the cone J generated by S - 1 and the negative orthant, and
 *      check it meets the nonnegative orthant only at 0.
 *   4. Separate J from the orthant by a strictly positive probability q.
 *
 * On a finite space the bounded-truncation set S ∩ L∞ is S itself, and
 * finitely generated cones are closed, so the topological parts of the
 * argument reduce to static facts that the report records as such.
 */

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "numlab/closure.hpp"
#include "numlab/core.hpp"
#include "numlab/numeraire.hpp"

namespace numlab {

/// f -> 1 on {g = 0}, f / g on {g > 0}; rays -> 0 on {g = 0}, r / g on {g > 0}.
template <ExactField Scalar>
ConvexBody<Scalar> reduce_to_one(const Vector<Scalar>& g, const ConvexBody<Scalar>& body) {
  detail::require_member(body, g, "reduce_to_one");
  if (detail::strict_positivity_violation(g, body)) {
    throw std::invalid_argument("reduce_to_one: g is not strictly positive on the body");
  }
  auto rescale = [&](const Vector<Scalar>& v, const Scalar& off_support) {
    Vector<Scalar> out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = g[i] > Scalar(0) ? Scalar(v[i] / g[i]) : off_support;
    return out;
  };
  std::vector<Vector<Scalar>> points;
  std::vector<Vector<Scalar>> rays;
  for (const auto& f : body.points()) points.push_back(rescale(f, Scalar(1)));
  for (const auto& r : body.rays()) rays.push_back(rescale(r, Scalar(0)));
  return ConvexBody<Scalar>(std::move(points), std::move(rays));
}

class ExplicitModeRefused : public std::logic_error {
 public:
  explicit ExplicitModeRefused(const std::string& what) : std::logic_error(what) {}
};

/// {f >= 0 : f <= h for some h in the base body}.
template <ExactField Scalar>
class SolidSet {
 public:
  static constexpr Eigen::Index kMaxExplicitAtoms = 12;

  explicit SolidSet(ConvexBody<Scalar> base) : base_(std::move(base)) {
    if (base_.rays().empty() && base_.dimension() <= kMaxExplicitAtoms) generators_ = vertices();
  }

  const ConvexBody<Scalar>& base() const { return base_; }
  Eigen::Index dimension() const { return base_.dimension(); }
  bool has_explicit() const { return generators_.has_value(); }

  const ConvexBody<Scalar>& explicit_generators() const {
    if (!generators_) {
      throw ExplicitModeRefused(base_.rays().empty() ? "solid hull: explicit mode limited to 12 atoms"
                                                     : "solid hull: explicit mode needs a bounded base");
    }
    return *generators_;
  }

  /// Membership via the LP "exists h in base with h >= f".
  bool contains(const Vector<Scalar>& f) const {
    if (f.size() != dimension()) throw DimensionMismatch("solid hull: dimension mismatch");
    if (!is_nonnegative(f)) return false;
    const auto& pts = base_.points();
    const auto& rays = base_.rays();
    const auto k = static_cast<Eigen::Index>(pts.size());
    const auto r = static_cast<Eigen::Index>(rays.size());
    lp::LinearProgram<Scalar> prog(k + r);
    Vector<Scalar> ones = Vector<Scalar>::Zero(k + r);
    ones.head(k).setConstant(Scalar(1));
    prog.add(std::move(ones), lp::Relation::Equal, Scalar(1));
    for (Eigen::Index i = 0; i < f.size(); ++i) {
      Vector<Scalar> row(k + r);
      for (Eigen::Index j = 0; j < k; ++j) row[j] = pts[j][i];
      for (Eigen::Index j = 0; j < r; ++j) row[k + j] = rays[j][i];
      prog.add(std::move(row), lp::Relation::GreaterEqual, f[i]);
    }
    return std::holds_alternative<lp::Optimal<Scalar>>(lp::solve(prog));
  }

  /// Membership in conv(explicit generators); must agree with contains().
  bool contains_explicit(const Vector<Scalar>& f) const { return numlab::contains(explicit_generators(), f); }

 private:
  // Every vertex of S is a base point with some coordinates zeroed. A
  // candidate p with support T is a vertex iff its restriction to T is not
  // in conv(other base points restricted to T) - R_+^T, since S ∩ {x = 0 off
  // T} is a face of S and p is interior to the orthant of T.
  ConvexBody<Scalar> vertices() const {
    const Eigen::Index n = dimension();
    std::vector<Vector<Scalar>> candidates;
    for (const auto& v : base_.points()) {
      for (unsigned long mask = 0; mask < (1UL << n); ++mask) {
        Vector<Scalar> p = v;
        for (Eigen::Index i = 0; i < n; ++i) {
          if (mask & (1UL << i)) p[i] = Scalar(0);
        }
        candidates.push_back(std::move(p));
      }
    }
    detail::sort_unique(candidates);

    std::vector<Vector<Scalar>> kept;
    for (const auto& p : candidates) {
      std::vector<Eigen::Index> support;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (p[i] != Scalar(0)) support.push_back(i);
      }
      if (support.empty() || !dominated_on_support(p, support)) kept.push_back(p);
    }
    return ConvexBody<Scalar>(std::move(kept));
  }

  bool dominated_on_support(const Vector<Scalar>& p, const std::vector<Eigen::Index>& support) const {
    const auto t = static_cast<Eigen::Index>(support.size());
    std::vector<Vector<Scalar>> others;
    for (const auto& v : base_.points()) {
      Vector<Scalar> proj(t);
      bool differs = false;
      for (Eigen::Index a = 0; a < t; ++a) {
        proj[a] = v[support[a]];
        if (proj[a] != p[support[a]]) differs = true;
      }
      if (differs) others.push_back(std::move(proj));
    }
    if (others.empty()) return false;
    const auto k = static_cast<Eigen::Index>(others.size());
    lp::LinearProgram<Scalar> prog(k + t);
    Vector<Scalar> ones = Vector<Scalar>::Zero(k + t);
    ones.head(k).setConstant(Scalar(1));
    prog.add(std::move(ones), lp::Relation::Equal, Scalar(1));
    for (Eigen::Index a = 0; a < t; ++a) {
      Vector<Scalar> row = Vector<Scalar>::Zero(k + t);
      for (Eigen::Index j = 0; j < k; ++j) row[j] = others[j][a];
      row[k + a] = Scalar(-1);
      prog.add(std::move(row), lp::Relation::Equal, p[support[a]]);
    }
    return std::holds_alternative<lp::Optimal<Scalar>>(lp::solve(prog));
  }

  ConvexBody<Scalar> base_;
  std::optional<ConvexBody<Scalar>> generators_;
};

template <ExactField Scalar>
SolidSet<Scalar> solid_hull(const ConvexBody<Scalar>& body) {
  return SolidSet<Scalar>(body);
}

/// No f in S with f >= 1 and f != 1. Throws NotInBody when 1 is not in S.
template <ExactField Scalar>
bool max_in_solid(const SolidSet<Scalar>& solid) {
  const Eigen::Index n = solid.dimension();
  const Vector<Scalar> one = Vector<Scalar>::Constant(n, Scalar(1));
  if (!solid.contains(one)) throw NotInBody("max_in_solid: 1 is not in the solid hull");
  if (!solid.base().rays().empty()) return false;
  const auto& pts = solid.base().points();
  const auto k = static_cast<Eigen::Index>(pts.size());
  lp::LinearProgram<Scalar> prog(k);
  prog.add(Vector<Scalar>::Constant(k, Scalar(1)), lp::Relation::Equal, Scalar(1));
  for (Eigen::Index i = 0; i < n; ++i) {
    Vector<Scalar> row(k);
    for (Eigen::Index j = 0; j < k; ++j) row[j] = pts[j][i];
    prog.add(std::move(row), lp::Relation::GreaterEqual, Scalar(1));
  }
  for (Eigen::Index j = 0; j < k; ++j) prog.objective[j] = pts[j].sum();
  const auto outcome = lp::solve(prog);
  return std::get<lp::Optimal<Scalar>>(outcome).value == Scalar(static_cast<long>(n));
}

/// Generators of J: f - 1 for each explicit generator f of S, then -e_i for
/// every atom (so that J = J - L∞+ holds by construction).
template <ExactField Scalar>
struct ConeRepr {
  std::vector<Vector<Scalar>> generators;
  std::size_t lifted_count = 0;
};

template <ExactField Scalar>
ConeRepr<Scalar> cone_J(const SolidSet<Scalar>& solid) {
  const auto& gens = solid.explicit_generators();
  const Eigen::Index n = solid.dimension();
  ConeRepr<Scalar> cone;
  for (const auto& f : gens.points()) cone.generators.push_back(f - Vector<Scalar>::Constant(n, Scalar(1)));
  cone.lifted_count = cone.generators.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    Vector<Scalar> e = Vector<Scalar>::Zero(n);
    e[i] = Scalar(-1);
    cone.generators.push_back(std::move(e));
  }
  return cone;
}

template <ExactField Scalar>
struct NestingCheck {
  Scalar alpha;
  Scalar beta;
  Vector<Scalar> f;
  Vector<Scalar> f_prime;
  bool holds = false;
};

template <ExactField Scalar>
struct ConePropertyReport {
  /// Optimal epsilon of "sum lambda_j phi_j >= epsilon on every atom".
  Scalar uniform_probe;
  /// Per atom: optimal t of "sum lambda_j phi_j >= 0, coordinate a >= t".
  std::vector<Scalar> atom_probes;
  /// A nonzero nonnegative element of J, when one exists.
  std::optional<Vector<Scalar>> positive_direction;
  bool downward_closed = true;
  std::vector<NestingCheck<Scalar>> nesting;

  bool meets_orthant_only_at_zero() const { return !positive_direction.has_value(); }
  bool nesting_holds() const {
    return std::all_of(nesting.begin(), nesting.end(), [](const auto& c) { return c.holds; });
  }
};

namespace detail {

// max t s.t. sum_j lambda_j phi_j >= 0, and >= t on `atoms`, t <= 1.
template <ExactField Scalar>
std::pair<Scalar, Vector<Scalar>> cone_probe(const ConeRepr<Scalar>& cone, Eigen::Index n,
                                             const std::vector<Eigen::Index>& atoms) {
  const auto k = static_cast<Eigen::Index>(cone.generators.size());
  const Eigen::Index t = k;
  lp::LinearProgram<Scalar> prog(k + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    Vector<Scalar> row = Vector<Scalar>::Zero(k + 1);
    for (Eigen::Index j = 0; j < k; ++j) row[j] = cone.generators[j][i];
    if (std::find(atoms.begin(), atoms.end(), i) != atoms.end()) row[t] = Scalar(-1);
    prog.add(std::move(row), lp::Relation::GreaterEqual, Scalar(0));
  }
  Vector<Scalar> cap = Vector<Scalar>::Zero(k + 1);
  cap[t] = Scalar(1);
  prog.add(std::move(cap), lp::Relation::LessEqual, Scalar(1));
  prog.objective[t] = Scalar(1);
  const auto outcome = lp::solve(prog);
  const auto& opt = std::get<lp::Optimal<Scalar>>(outcome);
  Vector<Scalar> direction = Vector<Scalar>::Zero(n);
  for (Eigen::Index j = 0; j < k; ++j) {
    if (opt.x[j] != Scalar(0)) direction += opt.x[j] * cone.generators[j];
  }
  return {opt.value, direction};
}

}  // namespace detail

/**
 * (i) J ∩ R^n_+ = {0}, by a uniform probe and one probe per atom;
 * (ii) J = J - R^n_+, which holds by construction;
 * (iii) alpha (f - 1) = beta (f' - 1) with f' = (alpha / beta) f + (beta - alpha) / beta
 *       on a fixed set of (alpha, beta) pairs and every lifted generator.
 */
template <ExactField Scalar>
ConePropertyReport<Scalar> check_cone_properties(const ConeRepr<Scalar>& cone) {
  ConePropertyReport<Scalar> report;
  if (cone.generators.empty()) return report;
  const Eigen::Index n = cone.generators.front().size();

  std::vector<Eigen::Index> all(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
  auto [uniform, uniform_dir] = detail::cone_probe(cone, n, all);
  report.uniform_probe = uniform;
  if (uniform > Scalar(0)) report.positive_direction = uniform_dir;
  for (Eigen::Index a = 0; a < n; ++a) {
    auto [value, dir] = detail::cone_probe(cone, n, {a});
    if (value > Scalar(0) && !report.positive_direction) report.positive_direction = dir;
    report.atom_probes.push_back(value);
  }

  // -e_i for every atom closes J downward.
  for (Eigen::Index i = 0; i < n; ++i) {
    Vector<Scalar> e = Vector<Scalar>::Zero(n);
    e[i] = Scalar(-1);
    const bool present = std::any_of(cone.generators.begin(), cone.generators.end(),
                                     [&](const auto& v) { return same(v, e); });
    if (!present) report.downward_closed = false;
  }

  const std::pair<Scalar, Scalar> pairs[] = {
      {Scalar(0), Scalar(1)}, {Scalar(1) / Scalar(2), Scalar(1)}, {Scalar(1), Scalar(2)}, {Scalar(2), Scalar(5)}};
  const Vector<Scalar> one = Vector<Scalar>::Constant(n, Scalar(1));
  for (std::size_t j = 0; j < cone.lifted_count; ++j) {
    const Vector<Scalar> f = cone.generators[j] + one;
    for (const auto& [alpha, beta] : pairs) {
      NestingCheck<Scalar> c{alpha, beta, f, Vector<Scalar>(alpha / beta * f + (beta - alpha) / beta * one)};
      c.holds = same(Vector<Scalar>(alpha * (f - one)), Vector<Scalar>(beta * (c.f_prime - one)));
      report.nesting.push_back(std::move(c));
    }
  }
  return report;
}

/// Strictly positive probability q with E_q[phi] <= 0 for every generator of J.
template <ExactField Scalar>
lp::StrictFeasibilityProblem<Scalar> separation_program(const ConeRepr<Scalar>& cone) {
  if (cone.generators.empty()) throw std::invalid_argument("separate: empty cone");
  const Eigen::Index n = cone.generators.front().size();
  lp::StrictFeasibilityProblem<Scalar> problem;
  problem.base = lp::LinearProgram<Scalar>(n);
  problem.base.add(Vector<Scalar>::Constant(n, Scalar(1)), lp::Relation::Equal, Scalar(1));
  for (const auto& phi : cone.generators) problem.base.add(phi, lp::Relation::LessEqual, Scalar(0));
  for (Eigen::Index i = 0; i < n; ++i) problem.strict_vars.push_back(i);
  return problem;
}

template <ExactField Scalar>
lp::StrictOutcome<Scalar> separate(const ConeRepr<Scalar>& cone) {
  return lp::solve_strict(separation_program(cone));
}

// ---------------------------------------------------------------------------
// Pipeline.

struct Assertion {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct StepReport {
  std::string name;
  std::vector<Assertion> assertions;
  std::vector<std::string> notes;

  bool passed() const {
    return std::all_of(assertions.begin(), assertions.end(), [](const auto& a) { return a.passed; });
  }
};

template <ExactField Scalar>
struct ProofReport {
  std::optional<ConvexBody<Scalar>> reduced;
  std::optional<ConvexBody<Scalar>> closure_body;
  bool closure_bounded = false;
  std::optional<ConvexBody<Scalar>> solid_generators;
  std::optional<ConeRepr<Scalar>> cone;
  std::optional<ConePropertyReport<Scalar>> cone_properties;
  std::optional<lp::StrictOutcome<Scalar>> separation;
  std::vector<StepReport> steps;
  /// "step/assertion" of the first failure.
  std::optional<std::string> first_failure;
  std::optional<Vector<Scalar>> q;
  std::optional<Vector<Scalar>> pulled_back_q;

  bool passed() const { return !first_failure && pulled_back_q.has_value(); }
};

namespace detail {

class StepRecorder {
 public:
  StepRecorder(std::vector<StepReport>& steps, std::optional<std::string>& first_failure, std::string name)
      : steps_(steps), first_failure_(first_failure) {
    steps_.push_back(StepReport{std::move(name), {}, {}});
  }

  bool check(std::string name, bool passed, std::string detail = {}) {
    auto& step = steps_.back();
    if (!passed && !first_failure_) first_failure_ = step.name + "/" + name;
    step.assertions.push_back({std::move(name), passed, std::move(detail)});
    return passed;
  }

  void note(std::string text) { steps_.back().notes.push_back(std::move(text)); }

 private:
  std::vector<StepReport>& steps_;
  std::optional<std::string>& first_failure_;
};

}  // namespace detail

/**
 * Runs the four steps on (g, C). Step failures are recorded, not thrown; the
 * pipeline stops at the first step whose output the next step cannot use.
 */
template <ExactField Scalar>
ProofReport<Scalar> run_pipeline(const Vector<Scalar>& g, const ConvexBody<Scalar>& body,
                                 const ClosureConfig<Scalar>& config = {}) {
  ProofReport<Scalar> report;
  const Eigen::Index n = g.size();
  const Vector<Scalar> one = Vector<Scalar>::Constant(n, Scalar(1));

  {
    detail::StepRecorder step(report.steps, report.first_failure, "reduce");
    report.reduced = reduce_to_one(g, body);
    step.check("one_in_reduced_set", contains(*report.reduced, one));
    const bool direct = std::holds_alternative<NumeraireCertificate<Scalar>>(detail::solve_numeraire(g, body));
    const bool reduced =
        std::holds_alternative<NumeraireCertificate<Scalar>>(detail::solve_numeraire(one, *report.reduced));
    step.check("lp_verdict_invariant", direct == reduced,
               std::string("original ") + (direct ? "feasible" : "infeasible") + ", reduced " +
                   (reduced ? "feasible" : "infeasible"));
  }

  {
    detail::StepRecorder step(report.steps, report.first_failure, "closure");
    const auto closure = cs_closure(one, *report.reduced, config);
    if (const auto* b = std::get_if<BoundedClosure<Scalar>>(&closure.verdict)) {
      report.closure_bounded = true;
      report.closure_body = b->body;
      step.check("fixed_point_reached", b->fixed_point_reached);
    } else {
      report.closure_body = *report.reduced;
      step.note("closure is not certified bounded; continuing with the reduced set as an inner approximation");
    }
  }

  std::optional<SolidSet<Scalar>> solid;
  {
    detail::StepRecorder step(report.steps, report.first_failure, "solid_hull");
    solid.emplace(*report.closure_body);
    if (!step.check("explicit_generators", solid->has_explicit(),
                    "needs a bounded body on at most 12 atoms")) {
      return report;
    }
    report.solid_generators = solid->explicit_generators();
    bool covers = true;
    for (const auto& f : report.reduced->points()) covers = covers && solid->contains(f);
    step.check("contains_reduced_set", covers);

    // Every generator must be a member; the two membership modes are compared
    // on at most eight evenly spaced generators, pushed outward and averaged
    // with a neighbour.
    const auto& gens = report.solid_generators->points();
    bool agree = true;
    for (const auto& f : gens) agree = agree && solid->contains(f);
    const std::size_t stride = std::max<std::size_t>(1, gens.size() / 8);
    for (std::size_t a = 0; a < gens.size() && agree; a += stride) {
      const Vector<Scalar> outward = gens[a] * (Scalar(8) / Scalar(7));
      agree = solid->contains(outward) == solid->contains_explicit(outward);
      const Vector<Scalar> mid = (gens[a] + gens[(a + 1) % gens.size()]) / Scalar(2);
      agree = agree && solid->contains(mid) && solid->contains_explicit(mid);
    }
    step.check("membership_modes_agree", agree);
    if (!step.check("one_is_maximal", max_in_solid(*solid))) return report;
  }

  {
    detail::StepRecorder step(report.steps, report.first_failure, "cone");
    report.cone = cone_J(*solid);
    report.cone_properties = check_cone_properties(*report.cone);
    const auto& props = *report.cone_properties;
    step.note("finitely generated cones are convex and closed; no weak* argument is needed");
    step.note("the solid hull is bounded, so truncation at level n leaves it unchanged");
    step.check("downward_closed", props.downward_closed);
    step.check("meets_orthant_only_at_zero", props.meets_orthant_only_at_zero());
    step.check("nesting_identity", props.nesting_holds());
  }

  {
    detail::StepRecorder step(report.steps, report.first_failure, "separation");
    report.separation = separate(*report.cone);
    const auto* sol = std::get_if<lp::StrictFeasible<Scalar>>(&*report.separation);
    if (!step.check("separation_found", sol != nullptr)) return report;
    const Vector<Scalar>& q = sol->x;
    bool bounded = true;
    for (const auto& f : report.solid_generators->points()) bounded = bounded && q.dot(f) <= Scalar(1);
    step.check("expectation_at_most_one_on_solid_hull", bounded);
    step.check("certifies_reduced_set", verify_certificate(one, *report.reduced, q));
    const bool original = verify_certificate(g, body, q);
    step.check("certifies_original_set", original);
    report.q = q;
    if (original) report.pulled_back_q = q;
  }
  return report;
}

}  // namespace numlab

#endif  // NUMLAB_PROOFLAB_HPP
