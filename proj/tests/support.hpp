#ifndef NUMLAB_TESTS_SUPPORT_HPP
#define NUMLAB_TESTS_SUPPORT_HPP

#include <initializer_list>
#include <string>
#include <vector>

#include "numlab/core.hpp"
#include "numlab/fuzz.hpp"

namespace numlab::testing {

inline Rational R(const char* s) { return parse_rational(s); }
inline Rational R(long n, long d = 1) { return Rational(n, d); }

/// vec({"1", "1/2", "0"})
inline RVector vec(std::initializer_list<const char*> xs) {
  RVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (const char* x : xs) v[i++] = parse_rational(x);
  return v;
}

inline RVector ones(Eigen::Index n) { return RVector::Constant(n, Rational(1)); }

inline ConvexBody<Rational> body(std::initializer_list<RVector> points, std::initializer_list<RVector> rays = {}) {
  return ConvexBody<Rational>(std::vector<RVector>(points), std::vector<RVector>(rays));
}

inline std::string str(const RVector& v) {
  std::string out = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) out += (i ? "," : "") + to_string(v[i]);
  return out + ")";
}

/// Random rational in [0, hi] with denominator at most den.
inline Rational draw(fuzz::SplitMix64& rng, long hi, long den) {
  const long d = 1 + static_cast<long>(rng.below(static_cast<std::uint64_t>(den)));
  return Rational(static_cast<long>(rng.below(static_cast<std::uint64_t>(hi * d + 1))), d);
}

inline RVector draw_vector(fuzz::SplitMix64& rng, Eigen::Index n, long hi, long den) {
  RVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = draw(rng, hi, den);
  return v;
}

/// Strictly positive probability vector with denominators up to den.
inline RVector draw_probability(fuzz::SplitMix64& rng, Eigen::Index n, long den) {
  RVector w(n);
  for (Eigen::Index i = 0; i < n; ++i) w[i] = draw(rng, 4, den) + Rational(1, den);
  return w / w.sum();
}

}  // namespace numlab::testing

#endif  // NUMLAB_TESTS_SUPPORT_HPP
