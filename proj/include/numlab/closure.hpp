#ifndef NUMLAB_CLOSURE_HPP
#define NUMLAB_CLOSURE_HPP

/**
 * The smallest closed convex superset of C that is stable under short
 * positions in g:  f in K, delta >= 0, (1 + delta) f - delta g >= 0  imply
 * (1 + delta) f - delta g in K.
 *
 * g is a numéraire of C exactly when this enlargement is bounded. The
 * closure is not computed in closed form. Instead:
 *
 *  - Bounded verdicts rest on the numéraire certificate q: the set
 *    K_q = {h >= 0 : h = 0 off supp g, E_q[h / g | g > 0] <= 1} is bounded
 *    and stable, so it contains the closure. The generator iteration below
 *    then only produces an inner approximation, every iterate of which is
 *    checked to lie in K_q.
 *  - Unbounded verdicts carry a derivation chain (generators, convex
 *    combinations, short-sale extensions) ending in an element h >= g,
 *    h != g, whose extension for every delta yields the ray h - g.
 */

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "numlab/core.hpp"
#include "numlab/numeraire.hpp"

namespace numlab {

/// sup{delta >= 0 : (1 + delta) f - delta g >= 0}; nullopt stands for +infinity
/// (exactly when f >= g).
template <ExactField Scalar>
std::optional<Scalar> delta_max(const Vector<Scalar>& f, const Vector<Scalar>& g) {
  require_same_size(f, g, "delta_max");
  std::optional<Scalar> best;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    if (g[i] > f[i]) {
      Scalar d = f[i] / (g[i] - f[i]);
      if (!best || d < *best) best = std::move(d);
    }
  }
  return best;
}

struct Fixed {};

template <ExactField Scalar>
struct ExtendedPoint {
  Vector<Scalar> point;
  Scalar delta;
};

template <ExactField Scalar>
struct ExtendedRay {
  Vector<Scalar> ray;
};

template <ExactField Scalar>
using ExtensionResult = std::variant<Fixed, ExtendedPoint<Scalar>, ExtendedRay<Scalar>>;

template <ExactField Scalar>
ExtensionResult<Scalar> cs3_extend(const Vector<Scalar>& f, const Vector<Scalar>& g) {
  if (!is_nonnegative(f) || !is_nonnegative(g)) throw std::invalid_argument("cs3_extend: negative input");
  if (same(f, g)) return Fixed{};
  auto delta = delta_max(f, g);
  if (!delta) return ExtendedRay<Scalar>{Vector<Scalar>(f - g)};
  if (*delta == Scalar(0)) return Fixed{};
  Vector<Scalar> p = (Scalar(1) + *delta) * f - *delta * g;
  return ExtendedPoint<Scalar>{std::move(p), std::move(*delta)};
}

// ---------------------------------------------------------------------------
// Derivation chains.

enum class StepKind {
  Generator,     ///< points[generator] of C
  GeneratorRay,  ///< rays[generator] of C (terminal)
  Combination,   ///< sum_k weights[k] * parents[k]
  Extension,     ///< (1 + delta) parent - delta g
  Ray,           ///< parent - g with parent >= g (terminal)
};

template <ExactField Scalar>
struct DerivationStep {
  StepKind kind = StepKind::Generator;
  Vector<Scalar> value;
  std::size_t generator = 0;
  std::vector<std::size_t> parents;
  std::vector<Scalar> weights;
  Scalar delta{};
};

template <ExactField Scalar>
using WitnessChain = std::vector<DerivationStep<Scalar>>;

struct WitnessCheck {
  bool ok = true;
  std::string reason;
};

/// Re-derives every step of the chain by exact arithmetic.
template <ExactField Scalar>
WitnessCheck verify_witness(const Vector<Scalar>& g, const ConvexBody<Scalar>& body,
                            const WitnessChain<Scalar>& chain) {
  auto fail = [](std::size_t i, const std::string& why) {
    return WitnessCheck{false, "step " + std::to_string(i) + ": " + why};
  };
  if (chain.empty()) return {false, "empty chain"};
  auto is_point_step = [&](std::size_t k) {
    const auto kind = chain[k].kind;
    return kind == StepKind::Generator || kind == StepKind::Combination || kind == StepKind::Extension;
  };

  for (std::size_t i = 0; i < chain.size(); ++i) {
    const auto& s = chain[i];
    if (s.value.size() != g.size()) return fail(i, "dimension mismatch");
    for (std::size_t p : s.parents) {
      if (p >= i) return fail(i, "parent does not precede step");
      if (!is_point_step(p)) return fail(i, "parent is not a member point");
    }
    const bool terminal = i + 1 == chain.size();
    switch (s.kind) {
      case StepKind::Generator:
        if (s.generator >= body.points().size() || !same(s.value, body.points()[s.generator])) {
          return fail(i, "generator value does not match the body");
        }
        break;
      case StepKind::GeneratorRay:
        if (!terminal) return fail(i, "ray before end of chain");
        if (s.generator >= body.rays().size() || !same(s.value, body.rays()[s.generator])) {
          return fail(i, "ray value does not match the body");
        }
        break;
      case StepKind::Combination: {
        if (s.parents.empty() || s.parents.size() != s.weights.size()) return fail(i, "malformed combination");
        Scalar total(0);
        Vector<Scalar> v = Vector<Scalar>::Zero(g.size());
        for (std::size_t k = 0; k < s.parents.size(); ++k) {
          if (s.weights[k] < Scalar(0)) return fail(i, "negative weight");
          total += s.weights[k];
          v += s.weights[k] * chain[s.parents[k]].value;
        }
        if (total != Scalar(1)) return fail(i, "weights do not sum to one");
        if (!same(v, s.value)) return fail(i, "combination value mismatch");
        break;
      }
      case StepKind::Extension: {
        if (s.parents.size() != 1) return fail(i, "extension needs one parent");
        if (s.delta < Scalar(0)) return fail(i, "negative leverage");
        const Vector<Scalar> v = (Scalar(1) + s.delta) * chain[s.parents[0]].value - s.delta * g;
        if (!same(v, s.value)) return fail(i, "extension value mismatch");
        if (!is_nonnegative(v)) return fail(i, "extension leaves the orthant");
        break;
      }
      case StepKind::Ray: {
        if (!terminal) return fail(i, "ray before end of chain");
        if (s.parents.size() != 1) return fail(i, "ray needs one parent");
        const auto& parent = chain[s.parents[0]].value;
        if (!dominates(parent, g)) return fail(i, "parent does not dominate g");
        const Vector<Scalar> v = parent - g;
        if (!same(v, s.value)) return fail(i, "ray value mismatch");
        if (is_zero(v)) return fail(i, "zero ray");
        break;
      }
    }
  }
  const auto last = chain.back().kind;
  if (last != StepKind::Ray && last != StepKind::GeneratorRay) return {false, "chain does not end in a ray"};
  return {};
}

// ---------------------------------------------------------------------------
// Closure.

template <ExactField Scalar>
struct ClosureConfig {
  int max_rounds = 50;
  /// Defaults to 2^20 times the largest generator entry.
  std::optional<Scalar> norm_cap;
  /// Also extend midpoints of generator pairs while searching for a witness.
  bool pair_midpoints = true;
};

template <ExactField Scalar>
struct BoundedClosure {
  /// Last iterate; an inner approximation of the closure.
  ConvexBody<Scalar> body;
  NumeraireCertificate<Scalar> certificate;
  /// C followed by each round's pruned body.
  std::vector<ConvexBody<Scalar>> iterates;
  int rounds = 0;
  bool fixed_point_reached = false;
};

template <ExactField Scalar>
struct UnboundedClosure {
  WitnessChain<Scalar> chain;
  int rounds = 0;
  const Vector<Scalar>& ray() const { return chain.back().value; }
};

template <ExactField Scalar>
struct InconclusiveClosure {
  int rounds = 0;
  Scalar max_norm;
  /// The norm cap was exceeded; a diagnostic, never a verdict.
  bool unbounded_suspected = false;
};

template <ExactField Scalar>
struct ClosureResult {
  std::variant<BoundedClosure<Scalar>, UnboundedClosure<Scalar>, InconclusiveClosure<Scalar>> verdict;
  std::variant<NumeraireCertificate<Scalar>, NumeraireInfeasible<Scalar>> lp;

  bool bounded() const { return std::holds_alternative<BoundedClosure<Scalar>>(verdict); }
  bool unbounded() const { return std::holds_alternative<UnboundedClosure<Scalar>>(verdict); }
};

/// Raised when a feasible certificate coexists with an emitted ray; impossible
/// unless the arithmetic or the solver is wrong.
class ClosureInvariantViolation : public std::logic_error {
 public:
  explicit ClosureInvariantViolation(const std::string& what) : std::logic_error(what) {}
};

namespace detail {

template <ExactField Scalar>
void require_closure_preconditions(const Vector<Scalar>& g, const ConvexBody<Scalar>& body) {
  require_member(body, g, "cs_closure");
  if (strict_positivity_violation(g, body)) {
    throw std::invalid_argument("cs_closure: g is not strictly positive on the body");
  }
}

template <ExactField Scalar>
BoundedClosure<Scalar> grow_bounded(const Vector<Scalar>& g, const ConvexBody<Scalar>& body,
                                    NumeraireCertificate<Scalar> cert, const ClosureConfig<Scalar>& config) {
  BoundedClosure<Scalar> out{body, std::move(cert), {body}, 0, false};
  ConvexBody<Scalar> current = prune(body);
  while (out.rounds < config.max_rounds) {
    ++out.rounds;
    std::vector<Vector<Scalar>> points = current.points();
    for (const auto& f : current.points()) {
      const auto ext = cs3_extend(f, g);
      if (std::holds_alternative<ExtendedRay<Scalar>>(ext)) {
        throw ClosureInvariantViolation("ray emitted while a numeraire certificate exists");
      }
      if (const auto* p = std::get_if<ExtendedPoint<Scalar>>(&ext)) points.push_back(p->point);
    }
    ConvexBody<Scalar> next = prune(ConvexBody<Scalar>(std::move(points), current.rays()));
    out.iterates.push_back(next);
    const bool stable = next == current;
    current = std::move(next);
    if (stable) {
      out.fixed_point_reached = true;
      break;
    }
  }
  out.body = std::move(current);
  return out;
}

template <ExactField Scalar>
class WitnessSearch {
 public:
  WitnessSearch(const Vector<Scalar>& g, const ConvexBody<Scalar>& body, const ClosureConfig<Scalar>& config)
      : g_(g), body_(body), config_(config) {}

  std::variant<UnboundedClosure<Scalar>, InconclusiveClosure<Scalar>> run() {
    if (!body_.rays().empty()) {
      DerivationStep<Scalar> s;
      s.kind = StepKind::GeneratorRay;
      s.value = body_.rays().front();
      s.generator = 0;
      return UnboundedClosure<Scalar>{{std::move(s)}, 0};
    }

    for (std::size_t k = 0; k < body_.points().size(); ++k) {
      DerivationStep<Scalar> s;
      s.kind = StepKind::Generator;
      s.value = body_.points()[k];
      s.generator = k;
      remember(add(std::move(s)));
    }
    const Scalar cap = config_.norm_cap ? *config_.norm_cap
                                        : Scalar(static_cast<long>(1) << 20) * max_generator_norm(body_);
    Scalar max_norm = max_generator_norm(body_);

    for (int round = 0;; ++round) {
      // Candidates: current generators, then pair midpoints.
      std::vector<std::size_t> candidates = current_;
      if (config_.pair_midpoints) {
        for (std::size_t a = 0; a < current_.size(); ++a) {
          for (std::size_t b = a + 1; b < current_.size(); ++b) {
            candidates.push_back(midpoint(current_[a], current_[b]));
          }
        }
      }
      for (std::size_t c : candidates) {
        const auto& f = arena_[c].value;
        if (dominates(f, g_) && !same(f, g_)) return unbounded_from(c, round);
      }

      // Some element of the current iterate dominating g, not just a generator.
      const auto maximality = is_maximal(g_, current_body());
      if (!maximality.maximal) {
        const auto& w = maximality.witness->weights;
        DerivationStep<Scalar> s;
        s.kind = StepKind::Combination;
        s.value = maximality.witness->dominator;
        for (Eigen::Index j = 0; j < w.size(); ++j) {
          if (w[j] != Scalar(0)) {
            s.parents.push_back(current_[static_cast<std::size_t>(j)]);
            s.weights.push_back(w[j]);
          }
        }
        return unbounded_from(add(std::move(s)), round);
      }

      if (round >= config_.max_rounds) return InconclusiveClosure<Scalar>{round, max_norm, false};

      std::vector<Vector<Scalar>> points;
      for (std::size_t id : current_) points.push_back(arena_[id].value);
      for (std::size_t c : candidates) {
        const auto ext = cs3_extend(arena_[c].value, g_);
        if (const auto* p = std::get_if<ExtendedPoint<Scalar>>(&ext)) {
          if (!known(p->point)) {
            DerivationStep<Scalar> s;
            s.kind = StepKind::Extension;
            s.value = p->point;
            s.parents = {c};
            s.delta = p->delta;
            remember(add(std::move(s)));
          }
          points.push_back(p->point);
        }
      }
      const ConvexBody<Scalar> pruned = prune(ConvexBody<Scalar>(std::move(points)));
      std::vector<std::size_t> next;
      for (const auto& v : pruned.points()) next.push_back(lookup_.at(key(v)));
      max_norm = std::max(max_norm, max_generator_norm(pruned));
      if (max_norm > cap) return InconclusiveClosure<Scalar>{round + 1, max_norm, true};
      if (next == current_) return InconclusiveClosure<Scalar>{round + 1, max_norm, false};
      current_ = std::move(next);
    }
  }

 private:
  static std::string key(const Vector<Scalar>& v) {
    std::string k;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      k += v[i].str();
      k += ',';
    }
    return k;
  }

  bool known(const Vector<Scalar>& v) const { return lookup_.count(key(v)) > 0; }

  std::size_t add(DerivationStep<Scalar> s) {
    arena_.push_back(std::move(s));
    return arena_.size() - 1;
  }

  // Registers a member point as a generator of the current iterate.
  void remember(std::size_t id) {
    const auto k = key(arena_[id].value);
    if (lookup_.emplace(k, id).second) current_.push_back(id);
  }

  std::size_t midpoint(std::size_t a, std::size_t b) {
    DerivationStep<Scalar> s;
    s.kind = StepKind::Combination;
    s.value = (arena_[a].value + arena_[b].value) / Scalar(2);
    s.parents = {a, b};
    s.weights = {Scalar(1) / Scalar(2), Scalar(1) / Scalar(2)};
    if (!known(s.value)) {
      const std::size_t id = add(std::move(s));
      lookup_.emplace(key(arena_[id].value), id);
      return id;
    }
    return lookup_.at(key(s.value));
  }

  ConvexBody<Scalar> current_body() const {
    std::vector<Vector<Scalar>> points;
    for (std::size_t id : current_) points.push_back(arena_[id].value);
    return ConvexBody<Scalar>(std::move(points));
  }

  UnboundedClosure<Scalar> unbounded_from(std::size_t dominator, int round) {
    DerivationStep<Scalar> r;
    r.kind = StepKind::Ray;
    r.value = arena_[dominator].value - g_;
    r.parents = {dominator};
    const std::size_t terminal = add(std::move(r));

    // Keep the ancestors of the terminal step, in arena order.
    std::vector<bool> needed(arena_.size(), false);
    needed[terminal] = true;
    for (std::size_t i = terminal + 1; i-- > 0;) {
      if (!needed[i]) continue;
      for (std::size_t p : arena_[i].parents) needed[p] = true;
    }
    std::map<std::size_t, std::size_t> renumber;
    WitnessChain<Scalar> chain;
    for (std::size_t i = 0; i <= terminal; ++i) {
      if (!needed[i]) continue;
      DerivationStep<Scalar> s = arena_[i];
      for (auto& p : s.parents) p = renumber.at(p);
      renumber[i] = chain.size();
      chain.push_back(std::move(s));
    }
    return UnboundedClosure<Scalar>{std::move(chain), round};
  }

  const Vector<Scalar>& g_;
  const ConvexBody<Scalar>& body_;
  const ClosureConfig<Scalar>& config_;
  std::vector<DerivationStep<Scalar>> arena_;
  std::map<std::string, std::size_t> lookup_;
  std::vector<std::size_t> current_;
};

}  // namespace detail

/**
 * Decide boundedness of the short-sale closure of C with respect to g.
 * Requires g in C and g strictly positive on C.
 */
template <ExactField Scalar>
ClosureResult<Scalar> cs_closure(const Vector<Scalar>& g, const ConvexBody<Scalar>& body,
                                 const ClosureConfig<Scalar>& config = {}) {
  detail::require_closure_preconditions(g, body);
  auto lp = detail::solve_numeraire(g, body);
  if (auto* cert = std::get_if<NumeraireCertificate<Scalar>>(&lp)) {
    auto bounded = detail::grow_bounded(g, body, *cert, config);
    return ClosureResult<Scalar>{std::move(bounded), std::move(lp)};
  }
  auto search = detail::WitnessSearch<Scalar>(g, body, config).run();
  ClosureResult<Scalar> out{InconclusiveClosure<Scalar>{}, std::move(lp)};
  std::visit([&](auto&& v) { out.verdict = std::move(v); }, std::move(search));
  return out;
}

enum class LpVerdict { Feasible, Infeasible };
enum class ClosureVerdict { Bounded, Unbounded, Inconclusive };
enum class Consistency { Consistent, Unresolved, Inconsistent };

template <ExactField Scalar>
struct ConsistencyReport {
  LpVerdict lp_verdict = LpVerdict::Feasible;
  ClosureVerdict closure_verdict = ClosureVerdict::Inconclusive;
  Consistency status = Consistency::Unresolved;
  /// Feasible runs: every generator of every iterate lies in K_q.
  std::optional<bool> containment_verified;
  /// Unbounded runs: the witness chain re-derives.
  std::optional<bool> witness_verified;
  std::string detail;
  ClosureResult<Scalar> result;
};

template <ExactField Scalar>
bool iterates_in_superset(const Vector<Scalar>& g, const BoundedClosure<Scalar>& bounded) {
  const auto& q = bounded.certificate.q;
  for (const auto& it : bounded.iterates) {
    if (!it.rays().empty()) return false;
    for (const auto& h : it.points()) {
      if (!in_superset_K(q, g, h)) return false;
    }
  }
  return true;
}

/// Cross-checks the LP verdict against the closure verdict.
template <ExactField Scalar>
ConsistencyReport<Scalar> verify_theorem(const Vector<Scalar>& g, const ConvexBody<Scalar>& body,
                                         const ClosureConfig<Scalar>& config = {}) {
  ConsistencyReport<Scalar> report{.lp_verdict = LpVerdict::Feasible,
                                    .closure_verdict = ClosureVerdict::Inconclusive,
                                    .status = Consistency::Unresolved,
                                    .containment_verified = std::nullopt,
                                    .witness_verified = std::nullopt,
                                    .detail = {},
                                    .result = cs_closure(g, body, config)};
  const auto& result = report.result;
  report.lp_verdict = std::holds_alternative<NumeraireCertificate<Scalar>>(result.lp) ? LpVerdict::Feasible
                                                                                      : LpVerdict::Infeasible;
  if (const auto* b = std::get_if<BoundedClosure<Scalar>>(&result.verdict)) {
    report.closure_verdict = ClosureVerdict::Bounded;
    report.containment_verified = iterates_in_superset(g, *b);
  } else if (const auto* u = std::get_if<UnboundedClosure<Scalar>>(&result.verdict)) {
    report.closure_verdict = ClosureVerdict::Unbounded;
    const auto check = verify_witness(g, body, u->chain);
    report.witness_verified = check.ok;
    if (!check.ok) report.detail = check.reason;
  } else {
    report.closure_verdict = ClosureVerdict::Inconclusive;
  }

  const bool feasible = report.lp_verdict == LpVerdict::Feasible;
  switch (report.closure_verdict) {
    case ClosureVerdict::Bounded:
      report.status = feasible && *report.containment_verified ? Consistency::Consistent
                                                               : Consistency::Inconsistent;
      break;
    case ClosureVerdict::Unbounded:
      report.status = !feasible && *report.witness_verified ? Consistency::Consistent
                                                            : Consistency::Inconsistent;
      break;
    case ClosureVerdict::Inconclusive:
      report.status = feasible ? Consistency::Inconsistent : Consistency::Unresolved;
      break;
  }
  return report;
}

}  // namespace numlab

#endif  // NUMLAB_CLOSURE_HPP
