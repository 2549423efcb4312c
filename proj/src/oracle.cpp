#include "numlab/oracle.hpp"

#include <stdexcept>

#include "numlab/numeraire.hpp"

namespace numlab::oracle {

namespace {

// Row a with sum_i a_i q_i <= 0, scaled by the lcm of its denominators.
std::vector<Integer> integer_row(const RVector& a) {
  Integer l = 1;
  for (Eigen::Index i = 0; i < a.size(); ++i) l = boost::multiprecision::lcm(l, Integer(denominator(a[i])));
  std::vector<Integer> row;
  for (Eigen::Index i = 0; i < a.size(); ++i) row.push_back(Integer(numerator(a[i])) * (l / Integer(denominator(a[i]))));
  return row;
}

std::vector<std::vector<Integer>> constraint_rows(const RVector& g, const ConvexBody<Rational>& body) {
  std::vector<std::vector<Integer>> rows;
  const Eigen::Index n = g.size();
  for (const auto& f : body.points()) {
    RVector a = RVector::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (g[i] > 0) a[i] = f[i] / g[i] - 1;
    }
    rows.push_back(integer_row(a));
  }
  for (const auto& r : body.rays()) {
    RVector a = RVector::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (g[i] > 0) a[i] = r[i] / g[i];
    }
    rows.push_back(integer_row(a));
  }
  return rows;
}

}  // namespace

GridResult grid_search(const RVector& g, const ConvexBody<Rational>& body, long mesh) {
  const Eigen::Index n = g.size();
  if (n != body.dimension()) throw DimensionMismatch("grid_search: dimension mismatch");
  if (n > 4) throw std::invalid_argument("grid_search: at most 4 atoms");
  if (mesh < n) throw std::invalid_argument("grid_search: mesh smaller than the number of atoms");
  const auto rows = constraint_rows(g, body);

  GridResult result;
  std::vector<long> k(static_cast<std::size_t>(n), 1);
  auto feasible = [&] {
    for (const auto& row : rows) {
      Integer s = 0;
      for (std::size_t i = 0; i < row.size(); ++i) s += row[i] * k[i];
      if (s > 0) return false;
    }
    return true;
  };
  // Compositions of mesh into n positive parts, the last part taking the rest.
  auto search = [&](auto&& self, std::size_t pos, long remaining) -> bool {
    if (pos + 1 == k.size()) {
      k[pos] = remaining;
      ++result.candidates;
      return feasible();
    }
    const long parts_after = static_cast<long>(k.size() - pos - 1);
    for (long v = 1; v <= remaining - parts_after; ++v) {
      k[pos] = v;
      if (self(self, pos + 1, remaining - v)) return true;
    }
    return false;
  };
  if (search(search, 0, mesh)) {
    RVector q(n);
    for (Eigen::Index i = 0; i < n; ++i) q[i] = Rational(k[static_cast<std::size_t>(i)], mesh);
    result.q = std::move(q);
  }
  return result;
}

Comparison compare(const RVector& g, const ConvexBody<Rational>& body, long mesh, const Rational& margin) {
  Comparison c;
  const auto outcome = detail::solve_numeraire(g, body);
  if (const auto* cert = std::get_if<NumeraireCertificate<Rational>>(&outcome)) {
    c.lp_feasible = true;
    c.epsilon = cert->epsilon;
  }
  const auto grid = grid_search(g, body, mesh);
  c.grid_feasible = grid.q.has_value();
  c.grid_q = grid.q;
  c.candidates = grid.candidates;
  c.outside_margin = c.epsilon > margin;
  c.agree = c.lp_feasible == c.grid_feasible;
  return c;
}

}  // namespace numlab::oracle
