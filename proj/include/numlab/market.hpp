#ifndef NUMLAB_MARKET_HPP
#define NUMLAB_MARKET_HPP

// One-period market with two assets paying xi and 1 + xi (both priced 1),
// portfolio constraint theta2 <= sqrt(theta1) <= 1, and its discretisations
// along the extreme curve theta = (gamma, sqrt(gamma)).

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "numlab/closure.hpp"
#include "numlab/core.hpp"
#include "numlab/numeraire.hpp"

namespace numlab::market {

class MarketModel {
 public:
  MarketModel(FiniteProbSpace<Rational> space, RVector xi);

  /// Uniform three-atom space with xi = (1/10, 1, 10).
  static MarketModel standard();

  const FiniteProbSpace<Rational>& space() const { return space_; }
  const RVector& xi() const { return xi_; }
  const Rational& xi_min() const { return xi_min_; }
  Eigen::Index atoms() const { return xi_.size(); }

 private:
  FiniteProbSpace<Rational> space_;
  RVector xi_;
  Rational xi_min_;
};

class GridValueError : public std::invalid_argument {
 public:
  GridValueError(const std::string& what, Rational offending, Rational suggestion)
      : std::invalid_argument(what), offending_(std::move(offending)), suggestion_(std::move(suggestion)) {}
  const Rational& offending() const { return offending_; }
  /// Closest square of a rational with denominator at most 64, clamped to [0, 1].
  const Rational& suggestion() const { return suggestion_; }

 private:
  Rational offending_;
  Rational suggestion_;
};

Rational nearest_square(const Rational& gamma);

/// Distinct rational squares in [0, 1], sorted, always containing 0.
class ConstraintGrid {
 public:
  explicit ConstraintGrid(std::vector<Rational> gammas);

  const std::vector<Rational>& gammas() const { return gammas_; }
  const std::vector<Rational>& roots() const { return roots_; }
  std::optional<Rational> min_positive() const;

 private:
  std::vector<Rational> gammas_;
  std::vector<Rational> roots_;
};

/// 1 - theta1 + (theta1 + theta2) xi, for 0 <= theta2, theta2^2 <= theta1 <= 1.
RVector wealth(const Rational& theta1, const Rational& theta2, const RVector& xi);

/// Wealth on the extreme curve, f_gamma = 1 - gamma + (gamma + sqrt(gamma)) xi.
RVector curve_wealth(const Rational& gamma, const RVector& xi);

/// sqrt(gamma) / (sqrt(gamma) + 1): the bound on E_q[xi] imposed by f_gamma.
Rational curve_bound(const Rational& gamma);

struct Scenario {
  MarketModel model;
  ConstraintGrid grid;
  ConvexBody<Rational> body;
  RVector g;
  /// Whether the analysis predicts 1 to be a numeraire: xi_min < curve_bound(min positive gamma).
  bool predicted_numeraire = true;
  Rational threshold;
};

Scenario build_scenario(const MarketModel& model, const ConstraintGrid& grid);

/// (xi_min / (1 - xi_min))^2; requires 0 < xi_min < 1.
Rational threshold_gamma(const Rational& xi_min);

struct DivergentPair {
  RVector f;
  RVector f_prime;
  Rational root;
};

/// f_n = n/(1+n) + (1/(1+n) + 1/sqrt(1+n)) xi and f'_n = (1+n) f_n - n.
/// Requires 1 + n to be a perfect square. Throws std::logic_error if the
/// identity f'_n = (1 + sqrt(1+n)) xi fails.
DivergentPair divergent_sequence(long n, const RVector& xi);

struct CurveClass {
  Rational gamma;
  bool maximal = true;
  /// Below the curve-bound threshold the generator fails maximality on a
  /// finite space, although the continuum formula lists it.
  bool finite_deviation = false;
};

struct OffCurveClass {
  Rational theta1;
  Rational theta2;
  bool on_curve = false;
  bool maximal = false;
  /// wealth(theta1, s) for some theta2 < s <= sqrt(theta1).
  std::optional<RVector> dominator;
  std::optional<Rational> dominating_theta2;
};

struct CmaxReport {
  std::vector<CurveClass> curve;
  std::vector<OffCurveClass> off_curve;
  bool agrees_with_formula = true;
};

CmaxReport expected_cmax(const Scenario& scenario,
                         const std::vector<std::pair<Rational, Rational>>& off_curve = {});

/// Adds the short-sale extension of every generator along g = 1 (a ray where
/// f >= 1, f != 1, an extended point otherwise).
ConvexBody<Rational> short_sale_enlargement(const Scenario& scenario);

struct ThresholdRow {
  Rational gamma_min;
  Rational bound;
  bool predicted = true;
  bool lp_feasible = true;
  std::optional<RVector> certificate;
};

/// For each gamma_min runs the LP on the grid {0, gamma_min} + extra.
std::vector<ThresholdRow> threshold_sweep(const MarketModel& model, const std::vector<Rational>& gamma_mins,
                                          const std::vector<Rational>& extra = {Rational(1, 4), Rational(1)});

/// gamma = 1 / k^2 for k = first..last.
std::vector<Rational> reciprocal_squares(long first, long last);

}  // namespace numlab::market

#endif  // NUMLAB_MARKET_HPP
