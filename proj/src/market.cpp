#include "numlab/market.hpp"

#include <algorithm>
#include <cmath>

namespace numlab::market {

namespace {

Rational require_root(const Rational& gamma) {
  if (gamma < 0 || gamma > 1) {
    throw GridValueError("grid value " + to_string(gamma) + " is outside [0, 1]", gamma, nearest_square(gamma));
  }
  auto root = exact_sqrt(gamma);
  if (!root) {
    throw GridValueError("grid value " + to_string(gamma) + " is not the square of a rational", gamma,
                         nearest_square(gamma));
  }
  return *root;
}

}  // namespace

MarketModel::MarketModel(FiniteProbSpace<Rational> space, RVector xi) : space_(std::move(space)), xi_(std::move(xi)) {
  require_same_size(xi_, space_.p(), "market model");
  if (!is_strictly_positive(xi_)) throw std::invalid_argument("market model: xi must be strictly positive");
  xi_min_ = xi_.minCoeff();
}

MarketModel MarketModel::standard() {
  RVector xi(3);
  xi << Rational(1, 10), Rational(1), Rational(10);
  return MarketModel(FiniteProbSpace<Rational>::uniform(3), std::move(xi));
}

Rational nearest_square(const Rational& gamma) {
  const double target = std::clamp(gamma.convert_to<double>(), 0.0, 1.0);
  const double root = std::sqrt(target);
  const Rational clamped = gamma < 0 ? Rational(0) : (gamma > 1 ? Rational(1) : gamma);
  Rational best(0);
  Rational best_gap = clamped;
  for (long den = 1; den <= 64; ++den) {
    const long num = std::lround(root * static_cast<double>(den));
    const Rational s(num, den);
    const Rational sq = s * s;
    if (sq > 1) continue;
    Rational gap = sq - clamped;
    if (gap < 0) gap = -gap;
    if (gap < best_gap) {
      best_gap = gap;
      best = sq;
    }
  }
  return best;
}

ConstraintGrid::ConstraintGrid(std::vector<Rational> gammas) : gammas_(std::move(gammas)) {
  gammas_.emplace_back(0);
  std::sort(gammas_.begin(), gammas_.end());
  gammas_.erase(std::unique(gammas_.begin(), gammas_.end()), gammas_.end());
  for (const auto& gamma : gammas_) roots_.push_back(require_root(gamma));
}

std::optional<Rational> ConstraintGrid::min_positive() const {
  for (const auto& gamma : gammas_) {
    if (gamma > 0) return gamma;
  }
  return std::nullopt;
}

RVector wealth(const Rational& theta1, const Rational& theta2, const RVector& xi) {
  if (theta2 < 0 || theta2 * theta2 > theta1 || theta1 > 1) {
    throw std::invalid_argument("wealth: (" + to_string(theta1) + ", " + to_string(theta2) +
                                ") violates theta2 <= sqrt(theta1) <= 1");
  }
  RVector out(xi.size());
  for (Eigen::Index i = 0; i < xi.size(); ++i) out[i] = 1 - theta1 + (theta1 + theta2) * xi[i];
  return out;
}

RVector curve_wealth(const Rational& gamma, const RVector& xi) { return wealth(gamma, require_root(gamma), xi); }

Rational curve_bound(const Rational& gamma) {
  const Rational root = require_root(gamma);
  return root / (root + 1);
}

Rational threshold_gamma(const Rational& xi_min) {
  if (xi_min <= 0 || xi_min >= 1) throw std::invalid_argument("threshold_gamma: need 0 < xi_min < 1");
  const Rational r = xi_min / (1 - xi_min);
  return r * r;
}

Scenario build_scenario(const MarketModel& model, const ConstraintGrid& grid) {
  std::vector<RVector> points;
  for (const auto& gamma : grid.gammas()) points.push_back(curve_wealth(gamma, model.xi()));
  ConvexBody<Rational> body(std::move(points));
  const bool predicted = !grid.min_positive() || model.xi_min() < curve_bound(*grid.min_positive());
  const Rational threshold = model.xi_min() < 1 ? threshold_gamma(model.xi_min()) : Rational(1);
  return Scenario{model, grid, std::move(body), RVector::Constant(model.atoms(), Rational(1)), predicted, threshold};
}

DivergentPair divergent_sequence(long n, const RVector& xi) {
  if (n < 0) throw std::invalid_argument("divergent_sequence: n must be nonnegative");
  const Rational m(n + 1);
  const auto root = exact_sqrt(m);
  if (!root) throw std::invalid_argument("divergent_sequence: 1 + n must be a perfect square");
  RVector f(xi.size());
  for (Eigen::Index i = 0; i < xi.size(); ++i) f[i] = Rational(n) / m + (1 / m + 1 / *root) * xi[i];
  RVector f_prime = m * f - RVector::Constant(xi.size(), Rational(n));
  const RVector expected = (1 + *root) * xi;
  if (!same(f_prime, expected)) throw std::logic_error("divergent_sequence: identity failed");
  return DivergentPair{std::move(f), std::move(f_prime), *root};
}

CmaxReport expected_cmax(const Scenario& scenario, const std::vector<std::pair<Rational, Rational>>& off_curve) {
  CmaxReport report;
  const auto& xi = scenario.model.xi();
  for (const auto& gamma : scenario.grid.gammas()) {
    const RVector f = curve_wealth(gamma, xi);
    CurveClass c{gamma, is_maximal(f, scenario.body).maximal, false};
    c.finite_deviation = !c.maximal;
    if (c.finite_deviation) report.agrees_with_formula = false;
    report.curve.push_back(std::move(c));
  }
  for (const auto& [theta1, theta2] : off_curve) {
    wealth(theta1, theta2, xi);  // rejects theta outside the constraint set
    OffCurveClass c;
    c.theta1 = theta1;
    c.theta2 = theta2;
    if (theta2 * theta2 == theta1) {
      c.on_curve = true;
      c.maximal = true;
      report.off_curve.push_back(std::move(c));
      continue;
    }
    // theta2^2 < theta1: take sqrt(theta1) when exact, else bisect towards 1
    // for a rational s with s^2 <= theta1.
    Rational hi(1);
    Rational s = exact_sqrt(theta1).value_or(hi);
    while (s * s > theta1) {
      s = (theta2 + hi) / 2;
      if (s * s > theta1) hi = s;
    }
    c.dominating_theta2 = s;
    c.dominator = wealth(theta1, s, xi);
    c.maximal = false;
    report.off_curve.push_back(std::move(c));
  }
  return report;
}

ConvexBody<Rational> short_sale_enlargement(const Scenario& scenario) {
  std::vector<RVector> points = scenario.body.points();
  std::vector<RVector> rays;
  for (const auto& f : scenario.body.points()) {
    const auto ext = cs3_extend(f, scenario.g);
    if (const auto* p = std::get_if<ExtendedPoint<Rational>>(&ext)) points.push_back(p->point);
    if (const auto* r = std::get_if<ExtendedRay<Rational>>(&ext)) rays.push_back(r->ray);
  }
  return ConvexBody<Rational>(std::move(points), std::move(rays));
}

std::vector<ThresholdRow> threshold_sweep(const MarketModel& model, const std::vector<Rational>& gamma_mins,
                                          const std::vector<Rational>& extra) {
  std::vector<ThresholdRow> rows;
  for (const auto& gamma_min : gamma_mins) {
    std::vector<Rational> gammas = extra;
    gammas.push_back(gamma_min);
    const Scenario s = build_scenario(model, ConstraintGrid(std::move(gammas)));
    ThresholdRow row{gamma_min, curve_bound(gamma_min), s.predicted_numeraire, false, std::nullopt};
    const auto outcome = is_numeraire(s.g, s.body);
    if (const auto* cert = std::get_if<NumeraireCertificate<Rational>>(&outcome)) {
      row.lp_feasible = true;
      row.certificate = cert->q;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<Rational> reciprocal_squares(long first, long last) {
  std::vector<Rational> out;
  for (long k = first; k <= last; ++k) out.emplace_back(1, k * k);
  return out;
}

}  // namespace numlab::market
