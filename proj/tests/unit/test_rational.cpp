#include <gtest/gtest.h>

#include "kisram/errors.hpp"
#include "kisram/rational.hpp"

using kisram::ExtRational;
using kisram::Rational;

TEST(Rational, ParseAndPrintCanonicalForm) {
  EXPECT_EQ(Rational::parse("6/8").str(), "3/4");
  EXPECT_EQ(Rational::parse("-4/2").str(), "-2");
  EXPECT_EQ(Rational::parse("0/5").str(), "0");
  EXPECT_EQ(Rational(10, -4).str(), "-5/2");
}

TEST(Rational, RejectsMalformedInput) {
  EXPECT_THROW(Rational::parse("1/0"), kisram::ParseError);
  EXPECT_THROW(Rational::parse("x"), kisram::ParseError);
  EXPECT_THROW(Rational::parse("1/-2"), kisram::ParseError);
  EXPECT_THROW(Rational::parse(""), kisram::ParseError);
}

TEST(Rational, Arithmetic) {
  const Rational a(1, 24), b(3, 8);
  EXPECT_EQ(a + b, Rational(5, 12));
  EXPECT_EQ(b - a, Rational(1, 3));
  EXPECT_EQ(a * b, Rational(1, 64));
  EXPECT_EQ(b / a, Rational(9));
  EXPECT_EQ(-a, Rational(-1, 24));
  EXPECT_LT(a, b);
}

TEST(Rational, FloorAndCeil) {
  EXPECT_EQ(Rational(7, 2).floor(), 3);
  EXPECT_EQ(Rational(7, 2).ceil(), 4);
  EXPECT_EQ(Rational(-7, 2).floor(), -4);
  EXPECT_EQ(Rational(-7, 2).ceil(), -3);
  EXPECT_EQ(Rational(4).ceil(), 4);
}

TEST(ExtRational, InfinityOrdersAboveEverything) {
  const ExtRational inf = ExtRational::infinity();
  EXPECT_TRUE(inf.is_infinite());
  EXPECT_LT(ExtRational(Rational(1000000)), inf);
  EXPECT_EQ(min(inf, ExtRational(Rational(1, 2))), ExtRational(Rational(1, 2)));
  EXPECT_EQ(inf + ExtRational(3), inf);
  EXPECT_EQ(ExtRational::parse("inf"), inf);
  EXPECT_EQ(ExtRational::parse("3/6").value(), Rational(1, 2));
  EXPECT_EQ(inf.str(), "inf");
}
