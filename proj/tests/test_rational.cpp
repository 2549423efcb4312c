#include <gtest/gtest.h>

#include "numlab/rational.hpp"
#include "support.hpp"

using namespace numlab;
using numlab::testing::R;

TEST(Rational, ParsesCanonicalForms) {
  EXPECT_EQ(parse_rational("3"), Rational(3));
  EXPECT_EQ(parse_rational("-3"), Rational(-3));
  EXPECT_EQ(parse_rational("+7/2"), Rational(7, 2));
  EXPECT_EQ(parse_rational("-1/2"), Rational(-1, 2));
  EXPECT_EQ(parse_rational("0/5"), Rational(0));
}

TEST(Rational, ReducesNonCanonicalInput) {
  EXPECT_EQ(to_string(parse_rational("2/4")), "1/2");
  EXPECT_EQ(to_string(parse_rational("6/3")), "2");
  EXPECT_EQ(to_string(parse_rational("3/-6")), "-1/2");
}

TEST(Rational, RejectsMalformedInput) {
  for (const char* bad : {"", "/", "1/", "/2", "1/0", "a", "1.5", "1//2", "1/2/3", "1 2", "--1"}) {
    EXPECT_THROW(parse_rational(bad), std::invalid_argument) << '"' << bad << '"';
  }
}

TEST(Rational, TrimsSurroundingWhitespace) {
  EXPECT_EQ(parse_rational(" 1/2 "), Rational(1, 2));
  EXPECT_EQ(parse_rational("\t3"), Rational(3));
}

TEST(Rational, PrintParseRoundTrip) {
  fuzz::SplitMix64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    const long num = static_cast<long>(rng.below(20001)) - 10000;
    const long den = 1 + static_cast<long>(rng.below(999));
    const Rational r(num, den);
    const std::string text = to_string(r);
    EXPECT_EQ(parse_rational(text), r);
    EXPECT_EQ(to_string(parse_rational(text)), text);
  }
}

TEST(Rational, HandlesLargeValues) {
  const std::string big = "123456789012345678901234567891/2";
  EXPECT_EQ(to_string(parse_rational(big)), big);
  const Rational x = parse_rational(big);
  EXPECT_EQ(x * Rational(2), parse_rational("123456789012345678901234567891"));
}

TEST(Rational, ExactSqrt) {
  EXPECT_EQ(exact_sqrt(R("1/4")), R("1/2"));
  EXPECT_EQ(exact_sqrt(R("0")), R("0"));
  EXPECT_EQ(exact_sqrt(R("9/100")), R("3/10"));
  EXPECT_FALSE(exact_sqrt(R("2")).has_value());
  EXPECT_FALSE(exact_sqrt(R("1/8")).has_value());
  EXPECT_FALSE(exact_sqrt(R("-1")).has_value());
}
