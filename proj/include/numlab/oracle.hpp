#ifndef NUMLAB_ORACLE_HPP
#define NUMLAB_ORACLE_HPP

// Brute-force check of the numeraire LP: enumerate q = k / mesh with every
// k_i >= 1 and test the defining inequalities in integer arithmetic. Shares
// no code with the simplex.

#include <optional>

#include "numlab/core.hpp"

namespace numlab::oracle {

struct GridResult {
  std::optional<RVector> q;
  std::size_t candidates = 0;
};

/// First feasible mesh point in lexicographic order of k. At most 4 atoms.
GridResult grid_search(const RVector& g, const ConvexBody<Rational>& body, long mesh = 128);

struct Comparison {
  bool lp_feasible = false;
  /// Optimal slack of the strict program; zero when infeasible.
  Rational epsilon;
  bool grid_feasible = false;
  std::optional<RVector> grid_q;
  std::size_t candidates = 0;
  /// epsilon > margin, so the mesh is expected to see the feasible set.
  bool outside_margin = false;
  bool agree = false;
};

Comparison compare(const RVector& g, const ConvexBody<Rational>& body, long mesh = 128,
                   const Rational& margin = Rational(1, 64));

}  // namespace numlab::oracle

#endif  // NUMLAB_ORACLE_HPP
