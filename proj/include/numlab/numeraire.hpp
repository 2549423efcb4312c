#ifndef NUMLAB_NUMERAIRE_HPP
#define NUMLAB_NUMERAIRE_HPP

/**
 * Numéraires of convex bodies on a finite probability space.
 *
 * g in C is a numéraire when it is strictly positive on C (every element of
 * C vanishes where g does) and some strictly positive probability q gives
 *
 *     E_q[f / g | g > 0] <= 1    for every f in C.
 *
 * On {g > 0} the conditional expectation is the ratio of two finite sums, so
 * the condition is linear in q and the search for q is a strict-feasibility
 * LP. Because the constraint is linear in f it suffices to impose it on the
 * generators; a ray r enters as E_q[r / g; g > 0] <= 0.
 */

#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "numlab/core.hpp"
#include "numlab/ratlp.hpp"

namespace numlab {

class NotInBody : public std::invalid_argument {
 public:
  explicit NotInBody(const std::string& what) : std::invalid_argument(what) {}
};

template <ExactField Scalar>
struct NumeraireCertificate {
  Vector<Scalar> q;
  Scalar epsilon;
  /// Generator points at which the inequality holds with equality.
  std::vector<std::size_t> binding;
};

template <ExactField Scalar>
struct NumeraireInfeasible {
  lp::StrictInfeasible<Scalar> farkas;
};

/// Generator `index` (a point unless `is_ray`) is positive on `atom` where g is zero.
struct NotStrictlyPositive {
  bool is_ray = false;
  std::size_t index = 0;
  Eigen::Index atom = 0;
};

/// g = 0 and C = {0}; excluded from the numéraire question.
struct TrivialCase {};

template <ExactField Scalar>
using NumeraireOutcome = std::variant<NumeraireCertificate<Scalar>, NumeraireInfeasible<Scalar>,
                                      NotStrictlyPositive, TrivialCase>;

template <ExactField Scalar>
struct MaximalityWitness {
  Vector<Scalar> dominator;
  /// Convex weights over the points producing the dominator; empty when the
  /// dominator is f plus a ray of the body.
  Vector<Scalar> weights;
};

template <ExactField Scalar>
struct MaximalityResult {
  bool maximal = true;
  std::optional<MaximalityWitness<Scalar>> witness;
};

namespace detail {

template <ExactField Scalar>
void require_member(const ConvexBody<Scalar>& body, const Vector<Scalar>& f, const char* where) {
  if (f.size() != body.dimension()) throw DimensionMismatch(std::string(where) + ": dimension mismatch");
  if (!contains(body, f)) throw NotInBody(std::string(where) + ": element is not in the body");
}

template <ExactField Scalar>
std::optional<NotStrictlyPositive> strict_positivity_violation(const Vector<Scalar>& g,
                                                                const ConvexBody<Scalar>& body) {
  auto scan = [&](const std::vector<Vector<Scalar>>& gens, bool is_ray) -> std::optional<NotStrictlyPositive> {
    for (std::size_t k = 0; k < gens.size(); ++k) {
      for (Eigen::Index i = 0; i < g.size(); ++i) {
        if (g[i] == Scalar(0) && gens[k][i] != Scalar(0)) return NotStrictlyPositive{is_ray, k, i};
      }
    }
    return std::nullopt;
  };
  if (auto v = scan(body.points(), false)) return v;
  return scan(body.rays(), true);
}

// sum over {g > 0} of q_i f_i / g_i.
template <ExactField Scalar>
Scalar weighted_ratio_sum(const Vector<Scalar>& q, const Vector<Scalar>& g, const Vector<Scalar>& f) {
  Scalar total(0);
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (g[i] > Scalar(0)) total += q[i] * f[i] / g[i];
  }
  return total;
}

template <ExactField Scalar>
Scalar mass_on_support(const Vector<Scalar>& q, const Vector<Scalar>& g) {
  Scalar total(0);
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (g[i] > Scalar(0)) total += q[i];
  }
  return total;
}

template <ExactField Scalar>
bool is_probability(const Vector<Scalar>& q) {
  return q.size() > 0 && is_strictly_positive(q) && q.sum() == Scalar(1);
}

}  // namespace detail

template <ExactField Scalar>
bool is_strictly_positive_on(const Vector<Scalar>& g, const ConvexBody<Scalar>& body) {
  detail::require_member(body, g, "is_strictly_positive_on");
  return !detail::strict_positivity_violation(g, body).has_value();
}

/**
 * Maximality of f in the body: maximize sum_i h_i over h in C with h >= f.
 * With rays present f + r dominates f for any ray r.
 */
template <ExactField Scalar>
MaximalityResult<Scalar> is_maximal(const Vector<Scalar>& f, const ConvexBody<Scalar>& body) {
  detail::require_member(body, f, "is_maximal");
  if (!body.rays().empty()) {
    return {false, MaximalityWitness<Scalar>{Vector<Scalar>(f + body.rays().front()), Vector<Scalar>()}};
  }
  const auto& points = body.points();
  const auto k = static_cast<Eigen::Index>(points.size());
  lp::LinearProgram<Scalar> prog(k);
  prog.add(Vector<Scalar>::Constant(k, Scalar(1)), lp::Relation::Equal, Scalar(1));
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    Vector<Scalar> row(k);
    for (Eigen::Index j = 0; j < k; ++j) row[j] = points[j][i];
    prog.add(std::move(row), lp::Relation::GreaterEqual, f[i]);
  }
  for (Eigen::Index j = 0; j < k; ++j) prog.objective[j] = points[j].sum();
  prog.sense = lp::Sense::Maximize;

  const auto outcome = lp::solve(prog);
  const auto& opt = std::get<lp::Optimal<Scalar>>(outcome);
  if (opt.value == f.sum()) return {true, std::nullopt};

  Vector<Scalar> h = Vector<Scalar>::Zero(f.size());
  for (Eigen::Index j = 0; j < k; ++j) {
    if (opt.x[j] != Scalar(0)) h += opt.x[j] * points[j];
  }
  return {false, MaximalityWitness<Scalar>{std::move(h), opt.x}};
}

/// The strict-feasibility program over q whose solutions certify g.
template <ExactField Scalar>
lp::StrictFeasibilityProblem<Scalar> numeraire_program(const Vector<Scalar>& g,
                                                       const ConvexBody<Scalar>& body) {
  if (g.size() != body.dimension()) throw DimensionMismatch("numeraire_program: dimension mismatch");
  const Eigen::Index n = g.size();
  lp::StrictFeasibilityProblem<Scalar> problem;
  problem.base = lp::LinearProgram<Scalar>(n);
  problem.base.add(Vector<Scalar>::Constant(n, Scalar(1)), lp::Relation::Equal, Scalar(1));
  for (const auto& f : body.points()) {
    Vector<Scalar> row = Vector<Scalar>::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (g[i] > Scalar(0)) row[i] = f[i] / g[i] - Scalar(1);
    }
    problem.base.add(std::move(row), lp::Relation::LessEqual, Scalar(0));
  }
  for (const auto& r : body.rays()) {
    Vector<Scalar> row = Vector<Scalar>::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (g[i] > Scalar(0)) row[i] = r[i] / g[i];
    }
    problem.base.add(std::move(row), lp::Relation::LessEqual, Scalar(0));
  }
  problem.strict_vars.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) problem.strict_vars[static_cast<std::size_t>(i)] = i;
  return problem;
}

namespace detail {

template <ExactField Scalar>
std::vector<std::size_t> binding_points(const Vector<Scalar>& q, const Vector<Scalar>& g,
                                        const ConvexBody<Scalar>& body) {
  std::vector<std::size_t> out;
  const Scalar mass = mass_on_support(q, g);
  for (std::size_t k = 0; k < body.points().size(); ++k) {
    if (weighted_ratio_sum(q, g, body.points()[k]) == mass) out.push_back(k);
  }
  return out;
}

// The LP alone, without the membership and strict positivity preconditions.
template <ExactField Scalar>
std::variant<NumeraireCertificate<Scalar>, NumeraireInfeasible<Scalar>> solve_numeraire(
    const Vector<Scalar>& g, const ConvexBody<Scalar>& body) {
  const auto outcome = lp::solve_strict(numeraire_program(g, body));
  if (const auto* sol = std::get_if<lp::StrictFeasible<Scalar>>(&outcome)) {
    return NumeraireCertificate<Scalar>{sol->x, sol->epsilon, binding_points(sol->x, g, body)};
  }
  return NumeraireInfeasible<Scalar>{std::get<lp::StrictInfeasible<Scalar>>(outcome)};
}

}  // namespace detail

template <ExactField Scalar>
NumeraireOutcome<Scalar> is_numeraire(const Vector<Scalar>& g, const ConvexBody<Scalar>& body) {
  detail::require_member(body, g, "is_numeraire");
  if (auto violation = detail::strict_positivity_violation(g, body)) return *violation;
  if (is_zero(g)) return TrivialCase{};
  auto res = detail::solve_numeraire(g, body);
  if (auto* cert = std::get_if<NumeraireCertificate<Scalar>>(&res)) return std::move(*cert);
  return std::get<NumeraireInfeasible<Scalar>>(std::move(res));
}

/// Checks a certificate by substitution only.
template <ExactField Scalar>
bool verify_certificate(const Vector<Scalar>& g, const ConvexBody<Scalar>& body,
                        const Vector<Scalar>& q) {
  if (q.size() != g.size() || g.size() != body.dimension()) return false;
  if (!detail::is_probability(q)) return false;
  if (detail::strict_positivity_violation(g, body)) return false;
  const Scalar mass = detail::mass_on_support(q, g);
  for (const auto& f : body.points()) {
    if (detail::weighted_ratio_sum(q, g, f) > mass) return false;
  }
  for (const auto& r : body.rays()) {
    if (detail::weighted_ratio_sum(q, g, r) > Scalar(0)) return false;
  }
  return true;
}

template <ExactField Scalar>
bool verify_infeasibility(const Vector<Scalar>& g, const ConvexBody<Scalar>& body,
                          const lp::StrictInfeasible<Scalar>& cert) {
  return lp::verify_strict_infeasible(numeraire_program(g, body), cert);
}

/// w_i = q_i / g_i on {g > 0} and w_i = q_i on {g = 0}.
template <ExactField Scalar>
Measure<Scalar> measure_from_certificate(const Vector<Scalar>& q, const Vector<Scalar>& g) {
  require_same_size(q, g, "measure_from_certificate");
  if (!detail::is_probability(q)) {
    throw std::invalid_argument("measure_from_certificate: q must be a strictly positive probability");
  }
  if (!is_nonnegative(g)) throw std::invalid_argument("measure_from_certificate: g must be nonnegative");
  Vector<Scalar> w(q.size());
  for (Eigen::Index i = 0; i < q.size(); ++i) w[i] = g[i] > Scalar(0) ? Scalar(q[i] / g[i]) : q[i];
  return Measure<Scalar>(std::move(w));
}

/**
 * How the two halves of the pulled-back probability are weighted when g has
 * zeros. Any weight strictly inside (0, 1) on the {g > 0} part yields a valid
 * certificate.
 *
 *  - Half:        1/2 on each part.
 *  - Proportional: weights int g dmu and mu[g = 0], normalized; this is the
 *                 exact inverse of measure_from_certificate.
 */
enum class MixingRule { Proportional, Half };

template <ExactField Scalar>
Vector<Scalar> certificate_from_measure(const Measure<Scalar>& mu, const Vector<Scalar>& g,
                                        MixingRule rule = MixingRule::Proportional) {
  require_same_size(mu.weights(), g, "certificate_from_measure");
  if (!mu.is_equivalent()) throw std::invalid_argument("certificate_from_measure: measure has null atoms");
  if (!is_nonnegative(g)) throw std::invalid_argument("certificate_from_measure: g must be nonnegative");
  if (is_zero(g)) throw std::invalid_argument("certificate_from_measure: g is identically zero");

  const auto& w = mu.weights();
  const Scalar g_mass = mu.integrate(g);
  Scalar zero_mass(0);
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (g[i] == Scalar(0)) zero_mass += w[i];
  }

  Vector<Scalar> q(g.size());
  if (zero_mass == Scalar(0)) {
    for (Eigen::Index i = 0; i < g.size(); ++i) q[i] = g[i] * w[i] / g_mass;
    return q;
  }
  const Scalar total = g_mass + zero_mass;
  const Scalar on_support = rule == MixingRule::Half ? Scalar(1) / Scalar(2) : Scalar(g_mass / total);
  const Scalar off_support = Scalar(1) - on_support;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    q[i] = g[i] > Scalar(0) ? Scalar(on_support * g[i] * w[i] / g_mass)
                            : Scalar(off_support * w[i] / zero_mass);
  }
  return q;
}

/// int g dmu = sup over C of int f dmu < infinity. A nonzero nonnegative ray
/// has positive integral under an equivalent measure, so any ray fails.
template <ExactField Scalar>
bool check_sup_identity(const Measure<Scalar>& mu, const Vector<Scalar>& g, const ConvexBody<Scalar>& body) {
  if (!mu.is_equivalent()) throw std::invalid_argument("check_sup_identity: measure has null atoms");
  if (!body.rays().empty()) return false;
  const Scalar target = mu.integrate(g);
  Scalar best = mu.integrate(body.points().front());
  for (const auto& f : body.points()) best = std::max(best, mu.integrate(f));
  return best == target;
}

/// Membership in {h >= 0 : h = 0 on {g = 0}, E_q[h / g | g > 0] <= 1}.
template <ExactField Scalar>
bool in_superset_K(const Vector<Scalar>& q, const Vector<Scalar>& g, const Vector<Scalar>& h) {
  require_same_size(q, g, "in_superset_K");
  require_same_size(h, g, "in_superset_K");
  if (!detail::is_probability(q)) throw std::invalid_argument("in_superset_K: q must be a strictly positive probability");
  if (!is_nonnegative(h)) throw std::invalid_argument("in_superset_K: h must be nonnegative");
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (g[i] == Scalar(0) && h[i] != Scalar(0)) return false;
  }
  return detail::weighted_ratio_sum(q, g, h) <= detail::mass_on_support(q, g);
}

}  // namespace numlab

#endif  // NUMLAB_NUMERAIRE_HPP
