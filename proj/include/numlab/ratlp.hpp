#ifndef NUMLAB_RATLP_HPP
#define NUMLAB_RATLP_HPP

/**
 * Exact linear programming over an ordered field.
 *
 * Dense two-phase simplex with Bland's rule. Every outcome carries a
 * certificate that can be re-checked by plain multiplication:
 *
 *  - Optimal:    primal point plus dual vector (textbook dual of the stated
 *                sense) with matching objective value.
 *  - Unbounded:  feasible point plus an improving recession direction.
 *  - Infeasible: Farkas multipliers y, one per constraint, with y_i <= 0 on
 *                "<=" rows, y_i >= 0 on ">=" rows, sum_i y_i a_i <= 0 and
 *                sum_i y_i b_i > 0.
 *
 * All variables are nonnegative.
 */

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "numlab/rational.hpp"

namespace numlab::lp {

enum class Relation { LessEqual, Equal, GreaterEqual };
enum class Sense { Maximize, Minimize };

template <ExactField Scalar>
struct Constraint {
  Vector<Scalar> coeffs;
  Relation relation = Relation::LessEqual;
  Scalar rhs{};
};

template <ExactField Scalar>
struct LinearProgram {
  Eigen::Index variables = 0;
  std::vector<Constraint<Scalar>> constraints;
  Vector<Scalar> objective;
  Sense sense = Sense::Maximize;

  LinearProgram() = default;
  explicit LinearProgram(Eigen::Index n)
      : variables(n), objective(Vector<Scalar>::Zero(n)) {}

  void add(Vector<Scalar> coeffs, Relation relation, Scalar rhs) {
    constraints.push_back({std::move(coeffs), relation, std::move(rhs)});
  }

  void validate() const {
    if (variables < 0) throw std::invalid_argument("lp: negative variable count");
    if (objective.size() != variables) {
      throw std::invalid_argument("lp: objective length does not match variable count");
    }
    for (const auto& c : constraints) {
      if (c.coeffs.size() != variables) {
        throw std::invalid_argument("lp: constraint length does not match variable count");
      }
    }
  }
};

template <ExactField Scalar>
struct Optimal {
  Vector<Scalar> x;
  Scalar value;
  Vector<Scalar> dual;
};

template <ExactField Scalar>
struct Unbounded {
  Vector<Scalar> x;
  Vector<Scalar> ray;
};

template <ExactField Scalar>
struct Infeasible {
  Vector<Scalar> farkas;
};

template <ExactField Scalar>
using Outcome = std::variant<Optimal<Scalar>, Unbounded<Scalar>, Infeasible<Scalar>>;

namespace detail {

template <ExactField Scalar>
class Simplex {
 public:
  explicit Simplex(const LinearProgram<Scalar>& lp) : lp_(lp) {
    lp.validate();
    rows_ = static_cast<Eigen::Index>(lp.constraints.size());
    structural_ = lp.variables;

    sigma_.resize(rows_);
    std::vector<Relation> flipped(rows_);
    Eigen::Index slacks = 0;
    Eigen::Index artificials = 0;
    for (Eigen::Index i = 0; i < rows_; ++i) {
      const auto& c = lp.constraints[i];
      sigma_[i] = c.rhs < Scalar(0) ? -1 : 1;
      Relation rel = c.relation;
      if (sigma_[i] < 0 && rel != Relation::Equal) {
        rel = rel == Relation::LessEqual ? Relation::GreaterEqual : Relation::LessEqual;
      }
      flipped[i] = rel;
      if (rel != Relation::Equal) ++slacks;
      if (rel != Relation::LessEqual) ++artificials;
    }

    columns_ = structural_ + slacks + artificials;
    rhs_ = columns_;
    table_ = Matrix<Scalar>::Zero(rows_, columns_ + 1);
    artificial_.assign(columns_, false);
    basis_.resize(rows_);
    initial_basis_.resize(rows_);

    Eigen::Index next_slack = structural_;
    Eigen::Index next_art = structural_ + slacks;
    for (Eigen::Index i = 0; i < rows_; ++i) {
      const auto& c = lp.constraints[i];
      const Scalar s(sigma_[i]);
      for (Eigen::Index j = 0; j < structural_; ++j) {
        if (c.coeffs[j] != Scalar(0)) table_(i, j) = s * c.coeffs[j];
      }
      table_(i, rhs_) = s * c.rhs;
      if (flipped[i] == Relation::LessEqual) {
        table_(i, next_slack) = Scalar(1);
        initial_basis_[i] = next_slack++;
      } else {
        if (flipped[i] == Relation::GreaterEqual) table_(i, next_slack++) = Scalar(-1);
        table_(i, next_art) = Scalar(1);
        artificial_[next_art] = true;
        initial_basis_[i] = next_art++;
      }
      basis_[i] = initial_basis_[i];
    }
    has_artificials_ = artificials > 0;
  }

  Outcome<Scalar> solve() {
    if (has_artificials_) {
      Vector<Scalar> phase1 = Vector<Scalar>::Zero(columns_);
      for (Eigen::Index j = 0; j < columns_; ++j) {
        if (artificial_[j]) phase1[j] = Scalar(-1);
      }
      load_cost(phase1);
      run(false);
      if (objective_value() < Scalar(0)) return Infeasible<Scalar>{farkas()};
      drive_out_artificials();
    }

    Vector<Scalar> phase2 = Vector<Scalar>::Zero(columns_);
    for (Eigen::Index j = 0; j < structural_; ++j) {
      phase2[j] = lp_.sense == Sense::Maximize ? lp_.objective[j] : Scalar(-lp_.objective[j]);
    }
    load_cost(phase2);
    const auto entering = run(true);
    if (entering) return Unbounded<Scalar>{primal(), ray(*entering)};

    Optimal<Scalar> out{primal(), objective_value(), duals()};
    if (lp_.sense == Sense::Minimize) {
      out.value = -out.value;
      out.dual = -out.dual;
    }
    return out;
  }

 private:
  void load_cost(const Vector<Scalar>& cost) {
    cost_ = cost;
    objective_row_ = Vector<Scalar>::Zero(columns_ + 1);
    for (Eigen::Index j = 0; j < columns_; ++j) objective_row_[j] = cost[j];
    for (Eigen::Index i = 0; i < rows_; ++i) {
      const Scalar cb = cost[basis_[i]];
      if (cb == Scalar(0)) continue;
      for (Eigen::Index j = 0; j <= columns_; ++j) {
        if (table_(i, j) != Scalar(0)) objective_row_[j] -= cb * table_(i, j);
      }
    }
  }

  // Objective value of the internal maximization.
  Scalar objective_value() const { return -objective_row_[rhs_]; }

  void pivot(Eigen::Index r, Eigen::Index c) {
    const Scalar p = table_(r, c);
    std::vector<Eigen::Index> nonzero;
    for (Eigen::Index j = 0; j <= columns_; ++j) {
      if (table_(r, j) != Scalar(0)) {
        table_(r, j) /= p;
        nonzero.push_back(j);
      }
    }
    auto eliminate = [&](auto&& row_at) {
      const Scalar f = row_at(c);
      if (f == Scalar(0)) return;
      for (Eigen::Index j : nonzero) row_at(j) -= f * table_(r, j);
    };
    for (Eigen::Index i = 0; i < rows_; ++i) {
      if (i != r) eliminate([&](Eigen::Index j) -> Scalar& { return table_(i, j); });
    }
    eliminate([&](Eigen::Index j) -> Scalar& { return objective_row_[j]; });
    basis_[r] = c;
  }

  // Bland's rule. Returns the entering column when the problem is unbounded.
  std::optional<Eigen::Index> run(bool block_artificials) {
    for (;;) {
      Eigen::Index entering = -1;
      for (Eigen::Index j = 0; j < columns_; ++j) {
        if (block_artificials && artificial_[j]) continue;
        if (objective_row_[j] > Scalar(0)) {
          entering = j;
          break;
        }
      }
      if (entering < 0) return std::nullopt;

      Eigen::Index leaving = -1;
      Scalar best;
      for (Eigen::Index i = 0; i < rows_; ++i) {
        if (!(table_(i, entering) > Scalar(0))) continue;
        Scalar ratio = table_(i, rhs_) / table_(i, entering);
        if (leaving < 0 || ratio < best || (ratio == best && basis_[i] < basis_[leaving])) {
          leaving = i;
          best = std::move(ratio);
        }
      }
      if (leaving < 0) return entering;
      pivot(leaving, entering);
    }
  }

  void drive_out_artificials() {
    for (Eigen::Index i = 0; i < rows_; ++i) {
      if (!artificial_[basis_[i]]) continue;
      for (Eigen::Index j = 0; j < columns_; ++j) {
        if (!artificial_[j] && table_(i, j) != Scalar(0)) {
          pivot(i, j);
          break;
        }
      }
      // A row with no non-artificial entry is redundant; its artificial stays
      // basic at zero and no later pivot can touch it.
    }
  }

  // pi = c_B B^{-1}, read off the objective row at the initial basis columns.
  Vector<Scalar> simplex_multipliers() const {
    Vector<Scalar> pi(rows_);
    for (Eigen::Index k = 0; k < rows_; ++k) {
      const Eigen::Index col = initial_basis_[k];
      pi[k] = cost_[col] - objective_row_[col];
    }
    return pi;
  }

  Vector<Scalar> farkas() const {
    const Vector<Scalar> pi = simplex_multipliers();
    Vector<Scalar> y(rows_);
    for (Eigen::Index k = 0; k < rows_; ++k) y[k] = Scalar(-sigma_[k]) * pi[k];
    return y;
  }

  Vector<Scalar> duals() const {
    const Vector<Scalar> pi = simplex_multipliers();
    Vector<Scalar> z(rows_);
    for (Eigen::Index k = 0; k < rows_; ++k) z[k] = Scalar(sigma_[k]) * pi[k];
    return z;
  }

  Vector<Scalar> primal() const {
    Vector<Scalar> x = Vector<Scalar>::Zero(structural_);
    for (Eigen::Index i = 0; i < rows_; ++i) {
      if (basis_[i] < structural_) x[basis_[i]] = table_(i, rhs_);
    }
    return x;
  }

  Vector<Scalar> ray(Eigen::Index entering) const {
    Vector<Scalar> d = Vector<Scalar>::Zero(structural_);
    if (entering < structural_) d[entering] = Scalar(1);
    for (Eigen::Index i = 0; i < rows_; ++i) {
      if (basis_[i] < structural_) d[basis_[i]] = -table_(i, entering);
    }
    return d;
  }

  const LinearProgram<Scalar>& lp_;
  Eigen::Index rows_ = 0;
  Eigen::Index structural_ = 0;
  Eigen::Index columns_ = 0;
  Eigen::Index rhs_ = 0;
  bool has_artificials_ = false;
  std::vector<int> sigma_;
  std::vector<bool> artificial_;
  std::vector<Eigen::Index> basis_;
  std::vector<Eigen::Index> initial_basis_;
  Matrix<Scalar> table_;
  Vector<Scalar> cost_;
  Vector<Scalar> objective_row_;
};

template <ExactField Scalar>
bool relation_holds(const Scalar& lhs, Relation relation, const Scalar& rhs) {
  switch (relation) {
    case Relation::LessEqual: return lhs <= rhs;
    case Relation::Equal: return lhs == rhs;
    case Relation::GreaterEqual: return lhs >= rhs;
  }
  return false;
}

// y_i <= 0 on "<=" rows, y_i >= 0 on ">=" rows.
template <ExactField Scalar>
bool farkas_sign_ok(Relation relation, const Scalar& y) {
  if (relation == Relation::LessEqual) return y <= Scalar(0);
  if (relation == Relation::GreaterEqual) return y >= Scalar(0);
  return true;
}

}  // namespace detail

template <ExactField Scalar>
Outcome<Scalar> solve(const LinearProgram<Scalar>& lp) {
  return detail::Simplex<Scalar>(lp).solve();
}

template <ExactField Scalar>
bool is_feasible_point(const LinearProgram<Scalar>& lp, const Vector<Scalar>& x) {
  if (x.size() != lp.variables) return false;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (x[j] < Scalar(0)) return false;
  }
  for (const auto& c : lp.constraints) {
    if (!detail::relation_holds(Scalar(c.coeffs.dot(x)), c.relation, c.rhs)) return false;
  }
  return true;
}

template <ExactField Scalar>
bool verify_farkas(const LinearProgram<Scalar>& lp, const Vector<Scalar>& y) {
  if (y.size() != static_cast<Eigen::Index>(lp.constraints.size())) return false;
  Vector<Scalar> combo = Vector<Scalar>::Zero(lp.variables);
  Scalar rhs(0);
  for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
    const auto& c = lp.constraints[i];
    if (!detail::farkas_sign_ok(c.relation, y[i])) return false;
    combo += y[i] * c.coeffs;
    rhs += y[i] * c.rhs;
  }
  for (Eigen::Index j = 0; j < combo.size(); ++j) {
    if (combo[j] > Scalar(0)) return false;
  }
  return rhs > Scalar(0);
}

template <ExactField Scalar>
bool verify_ray(const LinearProgram<Scalar>& lp, const Vector<Scalar>& d) {
  if (d.size() != lp.variables) return false;
  for (Eigen::Index j = 0; j < d.size(); ++j) {
    if (d[j] < Scalar(0)) return false;
  }
  for (const auto& c : lp.constraints) {
    if (!detail::relation_holds(Scalar(c.coeffs.dot(d)), c.relation, Scalar(0))) return false;
  }
  const Scalar gain = lp.objective.dot(d);
  return lp.sense == Sense::Maximize ? gain > Scalar(0) : gain < Scalar(0);
}

template <ExactField Scalar>
bool verify_optimal(const LinearProgram<Scalar>& lp, const Optimal<Scalar>& opt) {
  if (!is_feasible_point(lp, opt.x)) return false;
  if (opt.dual.size() != static_cast<Eigen::Index>(lp.constraints.size())) return false;
  const bool max = lp.sense == Sense::Maximize;
  Vector<Scalar> combo = Vector<Scalar>::Zero(lp.variables);
  Scalar bound(0);
  for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
    const auto& c = lp.constraints[i];
    // Textbook dual: for max, <= rows carry z >= 0; for min, >= rows do.
    const Scalar z = max ? opt.dual[i] : Scalar(-opt.dual[i]);
    if (!detail::farkas_sign_ok(c.relation, Scalar(-z))) return false;
    combo += opt.dual[i] * c.coeffs;
    bound += opt.dual[i] * c.rhs;
  }
  for (Eigen::Index j = 0; j < combo.size(); ++j) {
    if (max ? combo[j] < lp.objective[j] : combo[j] > lp.objective[j]) return false;
  }
  return bound == opt.value && Scalar(lp.objective.dot(opt.x)) == opt.value;
}

// ---------------------------------------------------------------------------
// Strict feasibility.

/// Find x >= 0 satisfying the constraints of `base` with x_j > 0 for every j
/// in `strict_vars`. The objective of `base` is ignored.
template <ExactField Scalar>
struct StrictFeasibilityProblem {
  LinearProgram<Scalar> base;
  std::vector<Eigen::Index> strict_vars;

  void validate() const {
    base.validate();
    if (strict_vars.empty()) throw std::invalid_argument("strict problem: no strict variables");
    std::vector<Eigen::Index> sorted = strict_vars;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw std::invalid_argument("strict problem: duplicate strict variable");
    }
    if (sorted.front() < 0 || sorted.back() >= base.variables) {
      throw std::invalid_argument("strict problem: strict variable out of range");
    }
  }
};

/// x at the maximal slack epsilon = min_j x_j (capped at one).
template <ExactField Scalar>
struct StrictFeasible {
  Vector<Scalar> x;
  Scalar epsilon;
};

/**
 * Certificate that {base, x_j - eps >= 0 (j strict), eps >= delta} is empty
 * for every delta > 0. `farkas` covers the base rows, `strict_multipliers`
 * the rows x_j - eps >= 0 and `delta_multiplier` the row eps >= delta.
 */
template <ExactField Scalar>
struct StrictInfeasible {
  Vector<Scalar> farkas;
  Vector<Scalar> strict_multipliers;
  Scalar delta_multiplier;
};

template <ExactField Scalar>
using StrictOutcome = std::variant<StrictFeasible<Scalar>, StrictInfeasible<Scalar>>;

template <ExactField Scalar>
StrictOutcome<Scalar> solve_strict(const StrictFeasibilityProblem<Scalar>& problem) {
  problem.validate();
  const auto& base = problem.base;
  const Eigen::Index n = base.variables;
  const Eigen::Index eps = n;
  const auto strict_count = static_cast<Eigen::Index>(problem.strict_vars.size());

  LinearProgram<Scalar> slack_lp(n + 1);
  for (const auto& c : base.constraints) {
    Vector<Scalar> row = Vector<Scalar>::Zero(n + 1);
    row.head(n) = c.coeffs;
    slack_lp.add(std::move(row), c.relation, c.rhs);
  }
  for (Eigen::Index j : problem.strict_vars) {
    Vector<Scalar> row = Vector<Scalar>::Zero(n + 1);
    row[j] = Scalar(1);
    row[eps] = Scalar(-1);
    slack_lp.add(std::move(row), Relation::GreaterEqual, Scalar(0));
  }
  {
    Vector<Scalar> row = Vector<Scalar>::Zero(n + 1);
    row[eps] = Scalar(1);
    slack_lp.add(std::move(row), Relation::LessEqual, Scalar(1));
  }
  slack_lp.objective[eps] = Scalar(1);
  slack_lp.sense = Sense::Maximize;

  const auto outcome = solve(slack_lp);
  const auto base_rows = static_cast<Eigen::Index>(base.constraints.size());

  if (std::holds_alternative<Infeasible<Scalar>>(outcome)) {
    // The slack program is feasible whenever the base is (take eps = 0), so
    // the base itself is empty; certify it on its own rows.
    LinearProgram<Scalar> phase1 = base;
    phase1.objective = Vector<Scalar>::Zero(n);
    const auto base_outcome = solve(phase1);
    const auto& inf = std::get<Infeasible<Scalar>>(base_outcome);
    return StrictInfeasible<Scalar>{inf.farkas, Vector<Scalar>::Zero(strict_count), Scalar(0)};
  }

  const auto& opt = std::get<Optimal<Scalar>>(outcome);
  if (opt.value > Scalar(0)) return StrictFeasible<Scalar>{opt.x.head(n), opt.value};

  // eps* = 0. Negate the textbook max dual to Farkas orientation; the cap row
  // is slack at eps = 0 so its multiplier only relaxes the bound.
  StrictInfeasible<Scalar> cert;
  cert.farkas = -opt.dual.head(base_rows);
  cert.strict_multipliers = -opt.dual.segment(base_rows, strict_count);
  cert.delta_multiplier = cert.strict_multipliers.sum();
  return cert;
}

template <ExactField Scalar>
bool verify_strict_feasible(const StrictFeasibilityProblem<Scalar>& problem,
                            const StrictFeasible<Scalar>& sol) {
  if (!(sol.epsilon > Scalar(0))) return false;
  if (!is_feasible_point(problem.base, sol.x)) return false;
  for (Eigen::Index j : problem.strict_vars) {
    if (sol.x[j] < sol.epsilon) return false;
  }
  return true;
}

template <ExactField Scalar>
bool verify_strict_infeasible(const StrictFeasibilityProblem<Scalar>& problem,
                              const StrictInfeasible<Scalar>& cert) {
  const auto& base = problem.base;
  if (cert.farkas.size() != static_cast<Eigen::Index>(base.constraints.size())) return false;
  if (cert.strict_multipliers.size() != static_cast<Eigen::Index>(problem.strict_vars.size())) {
    return false;
  }
  if (cert.delta_multiplier < Scalar(0)) return false;

  Vector<Scalar> combo = Vector<Scalar>::Zero(base.variables);
  Scalar rhs(0);
  for (std::size_t i = 0; i < base.constraints.size(); ++i) {
    const auto& c = base.constraints[i];
    if (!detail::farkas_sign_ok(c.relation, cert.farkas[i])) return false;
    combo += cert.farkas[i] * c.coeffs;
    rhs += cert.farkas[i] * c.rhs;
  }
  Scalar eps_coeff = cert.delta_multiplier;
  for (std::size_t k = 0; k < problem.strict_vars.size(); ++k) {
    const Scalar& m = cert.strict_multipliers[k];
    if (m < Scalar(0)) return false;
    combo[problem.strict_vars[k]] += m;
    eps_coeff -= m;
  }
  for (Eigen::Index j = 0; j < combo.size(); ++j) {
    if (combo[j] > Scalar(0)) return false;
  }
  if (eps_coeff > Scalar(0)) return false;
  if (rhs < Scalar(0)) return false;
  return rhs > Scalar(0) || cert.delta_multiplier > Scalar(0);
}

}  // namespace numlab::lp

#endif  // NUMLAB_RATLP_HPP
