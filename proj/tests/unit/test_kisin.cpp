#include <gtest/gtest.h>

#include <random>

#include "kisram/errors.hpp"
#include "kisram/kisin.hpp"
#include "kisram/literal.hpp"
#include "kisram/module_io.hpp"

using namespace kisram;

namespace {

KisinModule load(const std::string& body) { return parse_module_text("[module]\n" + body).module; }

const char* kRank2 = "p = 3\ne = 4\nh = 2\nd = 1\nprepared = true\nmatrix = [[u, 1], [u^4, 0]]\n";

SeriesMatrix scalar(std::size_t n, const PuiseuxSeries& s) {
  SeriesMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = s;
  return out;
}

// Random level-one module U * diag(1.., u, ..) * V with unipotent polynomial U (upper) and V (lower),
// so that A' = u^e A^{-1} is again polynomial and the degree is exactly d.
KisinModule random_module(std::uint32_t p, std::uint32_t h, std::uint32_t d, std::mt19937_64& rng) {
  const FieldPtr F = finite_field(p, 1);
  const auto poly = [&] {
    std::vector<Term> t;
    for (int k = 0; k < 3; ++k) t.push_back({Rational(static_cast<long>(rng() % 4)), rng() % p});
    return PuiseuxSeries::from_terms(F, t);
  };
  SeriesMatrix U = identity_matrix(h, F), V = identity_matrix(h, F), D = identity_matrix(h, F);
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = i + 1; j < h; ++j) {
      U(i, j) = poly();
      V(j, i) = poly();
    }
  for (std::size_t k = h - d; k < h; ++k) D(k, k) = PuiseuxSeries::monomial(F, 1, Rational(1));
  return KisinModule::level1(p, 1, 1, d, U * D * V);
}

}  // namespace

TEST(Kisin, ValidateRankTwoExample) {
  const KisinModule m = load(kRank2);
  const ValidationReport v = validate(m);
  EXPECT_EQ(v.degree, Rational(1));
  // A A' = u^e I, with u^e of v_R valuation 1.
  const FieldPtr F = m.field();
  const ExtRational prec(m.precision_vr);
  EXPECT_TRUE(agrees_with(m.matrix * v.complement, scalar(2, PuiseuxSeries::monomial(F, 1, Rational(1))), prec));
  EXPECT_TRUE(agrees_with(v.complement * m.matrix, scalar(2, PuiseuxSeries::monomial(F, 1, Rational(1))), prec));
  EXPECT_TRUE(has_prepared_form(m));
  EXPECT_EQ(hodge_height(m), Rational(1, 4));
}

TEST(Kisin, ValidationErrors) {
  EXPECT_THROW(validate(load("p = 3\ne = 1\nh = 1\nd = 1\nmatrix = [[u^2]]\n")), NotEHeightOne);
  EXPECT_THROW(validate(load("p = 3\ne = 1\nh = 2\nd = 1\nmatrix = [[1, 1], [1, 1]]\n")), SingularMatrix);
  EXPECT_THROW(validate(load("p = 3\ne = 1\nh = 2\nd = 1\nprepared = true\nmatrix = [[u, 0], [0, 1]]\n")), NotPrepared);
  EXPECT_THROW(load("p = 3\ne = 1\nh = 1\nd = 2\nmatrix = [[1]]\n"), SemanticError);
  EXPECT_THROW(load("p = 3\nf = 2\nn = 2\ne = 1\nh = 1\nd = 0\nmatrix = [[1]]\n"), Unsupported);
}

TEST(Kisin, PrepareFindsBlockForm) {
  const KisinModule m = load("p = 3\ne = 1\nh = 2\nd = 1\nmatrix = [[u, 0], [0, 1]]\n");
  EXPECT_FALSE(has_prepared_form(m));
  const KisinModule mp = prepare(m);
  EXPECT_TRUE(has_prepared_form(mp));
  EXPECT_EQ(hodge_height(mp), Rational(0));
}

TEST(Kisin, DualOfMuIsConstant) {
  const KisinModule mu = load("p = 5\ne = 3\nh = 1\nd = 1\nmatrix = [[u^3]]\n");
  const KisinModule z = dual(mu);
  EXPECT_EQ(z.d, 0u);
  EXPECT_TRUE(z.matrix(0, 0).agrees_with(PuiseuxSeries::constant(z.field(), 1), ExtRational(mu.precision_vr)));
  EXPECT_EQ(degree(z), Rational(0));
}

TEST(Kisin, RandomModulesDegreeAndDuality) {
  for (std::uint32_t p : {2u, 3u, 5u}) {
    std::mt19937_64 rng(p);
    for (int t = 0; t < 15; ++t) {
      const std::uint32_t h = 1 + rng() % 3, d = rng() % (h + 1);
      const KisinModule m = random_module(p, h, d, rng);
      EXPECT_EQ(validate(m).degree, Rational(static_cast<long>(d)));
      const KisinModule md = dual(m);
      EXPECT_EQ(md.d, h - d);
      EXPECT_EQ(degree(m) + degree(md), Rational(static_cast<long>(h)));
      EXPECT_TRUE(agrees_with(dual(md).matrix, m.matrix, ExtRational(m.precision_vr)));
    }
  }
}

TEST(Kisin, DirectSumIsBlockDiagonal) {
  const KisinModule a = load("p = 3\ne = 4\nh = 1\nd = 0\nmatrix = [[1]]\n");
  const KisinModule b = load(kRank2);
  const KisinModule s = direct_sum(a, b);
  EXPECT_EQ(s.h, 3u);
  EXPECT_EQ(s.d, 1u);
  EXPECT_EQ(degree(s), degree(a) + degree(b));
}

TEST(Kisin, CanonicalBasisChangeTriangularizes) {
  const KisinModule m = load(kRank2);
  const CanonicalData cd = canonical_level1(m);
  EXPECT_EQ(cd.w, Rational(1, 4));
  EXPECT_EQ(determinant(cd.D).valuation(), ExtRational(cd.w));

  // change = I + N with N^2 = 0, so change^{-1} = 2I - change.
  const FieldPtr F = m.field();
  const SeriesMatrix two = scalar(2, PuiseuxSeries::constant(F, 2));
  const SeriesMatrix inv = two - cd.change;
  const ExtRational cap(cd.working_precision);
  const SeriesMatrix product = mul_truncated(mul_truncated(inv, m.matrix, cap), frobenius(cd.change), cap);
  const ExtRational check(Rational(10));
  EXPECT_TRUE(agrees_with(product, cd.transformed, check));
  EXPECT_GE(product(1, 0).valuation_bound(), check);

  // B is a fixed point of its defining recursion.
  const SeriesMatrix again = b_recursion(cd, cd.B, m.p, cap);
  EXPECT_TRUE(agrees_with(again, cd.B, cap));
  EXPECT_EQ(cd.B(0, 0).coefficient(Rational(0)), 1u);
}

TEST(Kisin, CanonicalRejectsLargeHodgeHeight) {
  // w = 1 is not below p/(p+1).
  const KisinModule m = load("p = 3\ne = 1\nh = 2\nd = 1\nprepared = true\nmatrix = [[u, 1], [u, 0]]\n");
  EXPECT_THROW(canonical_level1(m), NonContractive);
}

TEST(Kisin, LevelTwoEvaluation) {
  const KisinModule m = load("p = 3\ne = 2\nn = 2\nh = 1\nd = 1\nmatrix = [[u^2 + 3]]\n");
  EXPECT_EQ(degree(m), Rational(2));
  EXPECT_EQ(format_zpoly(m.integral(0, 0)), "3 + u^2");
  // u^2 + 3 -> [u] + 3 = [u] + (0, 1) in W_2.
  const WittVector w = sn_evaluate(m, 0, 0);
  const FieldPtr F = m.field();
  const WittVector want = witt_add(WittVector::teichmuller(m.table(), PuiseuxSeries::monomial(F, 1, Rational(1))),
                                   WittVector::from_integer(m.table(), F, 3));
  EXPECT_EQ(w, want);
}
