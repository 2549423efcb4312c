#ifndef NUMLAB_RATIONAL_HPP
#define NUMLAB_RATIONAL_HPP

#include <concepts>
#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

namespace numlab {

using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

/// Exact rational in canonical reduced form (GMP mpq_t underneath).
using Rational = boost::multiprecision::number<
    boost::multiprecision::gmp_rational, boost::multiprecision::et_off>;

/// Ordered field with exact arithmetic. Every verdict in the library assumes
/// the scalar never rounds; instantiating with double compiles but voids the
/// certificates.
template <typename T>
concept ExactField = std::regular<T> && std::totally_ordered<T> &&
                     requires(T a, T b) {
                       { a + b } -> std::convertible_to<T>;
                       { a - b } -> std::convertible_to<T>;
                       { a * b } -> std::convertible_to<T>;
                       { a / b } -> std::convertible_to<T>;
                       { -a } -> std::convertible_to<T>;
                     };

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using RVector = Vector<Rational>;

/// Parses "a", "-a" or "a/b" (b != 0). Non-canonical input such as "2/4" is
/// reduced. Throws std::invalid_argument on anything else.
Rational parse_rational(std::string_view text);

/// Canonical "a/b", or "a" when the denominator is one.
std::string to_string(const Rational& value);

/// Square root when both numerator and denominator are perfect squares.
std::optional<Rational> exact_sqrt(const Rational& value);

}  // namespace numlab

#endif  // NUMLAB_RATIONAL_HPP
