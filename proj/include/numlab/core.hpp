#ifndef NUMLAB_CORE_HPP
#define NUMLAB_CORE_HPP

/**
 * Finite probability spaces, random variables, measures and polyhedral
 * convex bodies in the nonnegative orthant.
 *
 * A random variable on an n-atom space is a Vector<Scalar> of length n.
 * A ConvexBody is conv(points) + cone(rays); on a finite space the body is
 * bounded in probability exactly when it has no rays.
 */

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "numlab/ratlp.hpp"
#include "numlab/rational.hpp"

namespace numlab {

template <ExactField Scalar>
using RandomVariable = Vector<Scalar>;

class DimensionMismatch : public std::invalid_argument {
 public:
  explicit DimensionMismatch(const std::string& what) : std::invalid_argument(what) {}
};

template <ExactField Scalar>
void require_same_size(const Vector<Scalar>& a, const Vector<Scalar>& b, const char* where) {
  if (a.size() != b.size()) {
    throw DimensionMismatch(std::string(where) + ": dimension mismatch (" +
                            std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  }
}

template <ExactField Scalar>
bool is_nonnegative(const Vector<Scalar>& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] < Scalar(0)) return false;
  }
  return true;
}

template <ExactField Scalar>
bool is_zero(const Vector<Scalar>& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] != Scalar(0)) return false;
  }
  return true;
}

template <ExactField Scalar>
bool is_strictly_positive(const Vector<Scalar>& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!(v[i] > Scalar(0))) return false;
  }
  return true;
}

/// a >= b componentwise.
template <ExactField Scalar>
bool dominates(const Vector<Scalar>& a, const Vector<Scalar>& b) {
  require_same_size(a, b, "dominates");
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return false;
  }
  return true;
}

template <ExactField Scalar>
bool lex_less(const Vector<Scalar>& a, const Vector<Scalar>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

template <ExactField Scalar>
bool same(const Vector<Scalar>& a, const Vector<Scalar>& b) {
  return a.size() == b.size() && (a.size() == 0 || a == b);
}

/// Strictly positive probability vector; a representative of the class of
/// probabilities equivalent to the reference one.
template <ExactField Scalar>
class FiniteProbSpace {
 public:
  explicit FiniteProbSpace(Vector<Scalar> p) : p_(std::move(p)) {
    if (p_.size() < 1) throw std::invalid_argument("probability space needs at least one atom");
    if (!is_strictly_positive(p_)) {
      throw std::invalid_argument("probability vector must be strictly positive");
    }
    if (p_.sum() != Scalar(1)) throw std::invalid_argument("probability vector must sum to one");
  }

  static FiniteProbSpace uniform(Eigen::Index n) {
    if (n < 1) throw std::invalid_argument("probability space needs at least one atom");
    return FiniteProbSpace(Vector<Scalar>::Constant(n, Scalar(1) / Scalar(static_cast<long>(n))));
  }

  Eigen::Index atoms() const { return p_.size(); }
  const Vector<Scalar>& p() const { return p_; }
  const Scalar& operator[](Eigen::Index i) const { return p_[i]; }

  Scalar expectation(const Vector<Scalar>& f) const {
    require_same_size(f, p_, "expectation");
    return p_.dot(f);
  }

 private:
  Vector<Scalar> p_;
};

template <ExactField Scalar>
class Measure {
 public:
  explicit Measure(Vector<Scalar> weights) : w_(std::move(weights)) {
    if (!is_nonnegative(w_)) throw std::invalid_argument("measure weights must be nonnegative");
  }

  const Vector<Scalar>& weights() const { return w_; }
  Eigen::Index atoms() const { return w_.size(); }

  /// Equivalent to the reference probability: no null atoms.
  bool is_equivalent() const { return is_strictly_positive(w_); }

  Scalar integrate(const Vector<Scalar>& f) const {
    require_same_size(f, w_, "integrate");
    return w_.dot(f);
  }

  friend bool operator==(const Measure& a, const Measure& b) { return same(a.w_, b.w_); }

 private:
  Vector<Scalar> w_;
};

/// conv(points) + cone(rays), a convex subset of the nonnegative orthant.
template <ExactField Scalar>
class ConvexBody {
 public:
  explicit ConvexBody(std::vector<Vector<Scalar>> points, std::vector<Vector<Scalar>> rays = {})
      : points_(std::move(points)), rays_(std::move(rays)) {
    if (points_.empty()) throw std::invalid_argument("convex body needs at least one point");
    const Eigen::Index n = points_.front().size();
    if (n < 1) throw std::invalid_argument("convex body needs at least one atom");
    for (const auto& p : points_) {
      if (p.size() != n) throw DimensionMismatch("convex body: points of different lengths");
      if (!is_nonnegative(p)) throw std::invalid_argument("convex body: negative point entry");
    }
    for (const auto& r : rays_) {
      if (r.size() != n) throw DimensionMismatch("convex body: ray length differs from points");
      if (!is_nonnegative(r)) throw std::invalid_argument("convex body: negative ray entry");
      if (is_zero(r)) throw std::invalid_argument("convex body: zero ray");
    }
  }

  static ConvexBody singleton(Vector<Scalar> point) { return ConvexBody({std::move(point)}); }

  Eigen::Index dimension() const { return points_.front().size(); }
  const std::vector<Vector<Scalar>>& points() const { return points_; }
  const std::vector<Vector<Scalar>>& rays() const { return rays_; }

  friend bool operator==(const ConvexBody& a, const ConvexBody& b) {
    auto same_list = [](const auto& x, const auto& y) {
      return x.size() == y.size() &&
             std::equal(x.begin(), x.end(), y.begin(),
                        [](const auto& u, const auto& v) { return same(u, v); });
    };
    return same_list(a.points_, b.points_) && same_list(a.rays_, b.rays_);
  }

 private:
  std::vector<Vector<Scalar>> points_;
  std::vector<Vector<Scalar>> rays_;
};

/// sum_i q_i min(|f_i - h_i|, 1).
template <ExactField Scalar>
Scalar dist_q(const Vector<Scalar>& f, const Vector<Scalar>& h, const FiniteProbSpace<Scalar>& q) {
  require_same_size(f, h, "dist_q");
  require_same_size(f, q.p(), "dist_q");
  Scalar total(0);
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    Scalar gap = f[i] - h[i];
    if (gap < Scalar(0)) gap = -gap;
    total += q[i] * std::min(gap, Scalar(1));
  }
  return total;
}

namespace detail {

// Weights (lambda over points, mu over rays) expressing f, or nothing.
template <ExactField Scalar>
std::optional<Vector<Scalar>> representation(const std::vector<Vector<Scalar>>& points,
                                             const std::vector<Vector<Scalar>>& rays,
                                             const Vector<Scalar>& f) {
  if (points.empty()) return std::nullopt;
  const auto k = static_cast<Eigen::Index>(points.size());
  const auto r = static_cast<Eigen::Index>(rays.size());
  const Eigen::Index n = f.size();

  lp::LinearProgram<Scalar> prog(k + r);
  Vector<Scalar> ones = Vector<Scalar>::Zero(k + r);
  ones.head(k).setConstant(Scalar(1));
  prog.add(std::move(ones), lp::Relation::Equal, Scalar(1));
  for (Eigen::Index i = 0; i < n; ++i) {
    Vector<Scalar> row(k + r);
    for (Eigen::Index j = 0; j < k; ++j) row[j] = points[j][i];
    for (Eigen::Index j = 0; j < r; ++j) row[k + j] = rays[j][i];
    prog.add(std::move(row), lp::Relation::Equal, f[i]);
  }
  const auto outcome = lp::solve(prog);
  if (const auto* opt = std::get_if<lp::Optimal<Scalar>>(&outcome)) return opt->x;
  return std::nullopt;
}

template <ExactField Scalar>
bool in_cone(const std::vector<Vector<Scalar>>& rays, const Vector<Scalar>& d) {
  if (rays.empty()) return is_zero(d);
  const auto r = static_cast<Eigen::Index>(rays.size());
  lp::LinearProgram<Scalar> prog(r);
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    Vector<Scalar> row(r);
    for (Eigen::Index j = 0; j < r; ++j) row[j] = rays[j][i];
    prog.add(std::move(row), lp::Relation::Equal, d[i]);
  }
  return std::holds_alternative<lp::Optimal<Scalar>>(lp::solve(prog));
}

template <ExactField Scalar>
void sort_unique(std::vector<Vector<Scalar>>& vs) {
  std::sort(vs.begin(), vs.end(), [](const auto& a, const auto& b) { return lex_less(a, b); });
  vs.erase(std::unique(vs.begin(), vs.end(), [](const auto& a, const auto& b) { return same(a, b); }),
           vs.end());
}

}  // namespace detail

/// Convex weights over the points followed by conic weights over the rays,
/// when f belongs to the body.
template <ExactField Scalar>
std::optional<Vector<Scalar>> representation(const ConvexBody<Scalar>& body, const Vector<Scalar>& f) {
  if (f.size() != body.dimension()) throw DimensionMismatch("contains: dimension mismatch");
  return detail::representation(body.points(), body.rays(), f);
}

template <ExactField Scalar>
bool contains(const ConvexBody<Scalar>& body, const Vector<Scalar>& f) {
  return representation(body, f).has_value();
}

template <ExactField Scalar>
bool is_bounded(const ConvexBody<Scalar>& body) {
  return body.rays().empty();
}

/// Same set with irredundant generators in lexicographic order. Redundancy is
/// removed from the lexicographically largest generator down, so among
/// parallel rays the smallest survives.
template <ExactField Scalar>
ConvexBody<Scalar> prune(const ConvexBody<Scalar>& body) {
  std::vector<Vector<Scalar>> rays = body.rays();
  detail::sort_unique(rays);
  for (std::size_t i = rays.size(); i-- > 0;) {
    std::vector<Vector<Scalar>> others;
    for (std::size_t j = 0; j < rays.size(); ++j) {
      if (j != i) others.push_back(rays[j]);
    }
    if (detail::in_cone(others, rays[i])) rays.erase(rays.begin() + static_cast<std::ptrdiff_t>(i));
  }

  std::vector<Vector<Scalar>> points = body.points();
  detail::sort_unique(points);
  for (std::size_t i = points.size(); i-- > 0;) {
    std::vector<Vector<Scalar>> others;
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (j != i) others.push_back(points[j]);
    }
    if (detail::representation(others, rays, points[i])) {
      points.erase(points.begin() + static_cast<std::ptrdiff_t>(i));
    }
  }
  return ConvexBody<Scalar>(std::move(points), std::move(rays));
}

/// Infinity norm of the largest generator.
template <ExactField Scalar>
Scalar max_generator_norm(const ConvexBody<Scalar>& body) {
  Scalar best(0);
  auto scan = [&](const std::vector<Vector<Scalar>>& vs) {
    for (const auto& v : vs) {
      for (Eigen::Index i = 0; i < v.size(); ++i) best = std::max(best, v[i] < Scalar(0) ? Scalar(-v[i]) : v[i]);
    }
  };
  scan(body.points());
  scan(body.rays());
  return best;
}

}  // namespace numlab

#endif  // NUMLAB_CORE_HPP
