#include <gtest/gtest.h>

#include <random>

#include "kisram/errors.hpp"
#include "kisram/literal.hpp"
#include "kisram/witt.hpp"

using namespace kisram;

namespace {

mpz_class ipow(const mpz_class& b, unsigned long k) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), k);
  return r;
}

// W_n(F_p) = Z/p^n via (a_0, ..., a_{n-1}) -> sum p^j T(a_j), T(a) = a^{p^{n-1}} mod p^n.
mpz_class to_integer(const WittVector& x, std::uint32_t p) {
  const std::size_t n = x.length();
  const mpz_class pn = ipow(p, n);
  mpz_class total = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const mpz_class a = x[j].is_zero() ? 0 : mpz_class(static_cast<unsigned long>(x[j].coefficient(Rational(0))));
    mpz_class t;
    mpz_powm(t.get_mpz_t(), a.get_mpz_t(), ipow(p, n - 1).get_mpz_t(), pn.get_mpz_t());
    total += ipow(p, j) * t;
  }
  mpz_class r = total % pn;
  if (r < 0) r += pn;
  return r;
}

WittVector constant_vector(const WittTablePtr& T, const FieldPtr& F, std::mt19937_64& rng) {
  std::vector<PuiseuxSeries> c;
  for (std::uint32_t j = 0; j < T->n(); ++j) c.push_back(PuiseuxSeries::constant(F, rng() % F->order()));
  return WittVector(T, c);
}

WittVector random_vector(const WittTablePtr& T, const FieldPtr& F, std::mt19937_64& rng) {
  std::vector<PuiseuxSeries> c;
  for (std::uint32_t j = 0; j < T->n(); ++j) {
    std::vector<Term> terms;
    for (int k = 0; k < 3; ++k) terms.push_back({Rational(static_cast<long>(rng() % 12), 1 + rng() % 3), rng() % F->order()});
    c.push_back(PuiseuxSeries::from_terms(F, terms));
  }
  return WittVector(T, c);
}

// Evaluates an integer polynomial in X_0..X_{n-1}, Y_0..Y_{n-1} at integer points.
mpz_class eval(const IntPoly& poly, const std::vector<mpz_class>& xy) {
  mpz_class acc = 0;
  for (const auto& [exps, coeff] : poly) {
    mpz_class term = coeff;
    for (std::size_t k = 0; k < exps.size(); ++k) term *= ipow(xy[k], exps[k]);
    acc += term;
  }
  return acc;
}

mpz_class ghost(const std::vector<mpz_class>& v, std::uint32_t p, std::uint32_t m) {
  mpz_class acc = 0;
  for (std::uint32_t j = 0; j <= m; ++j) acc += ipow(p, j) * ipow(v[j], ipow(p, m - j).get_ui());
  return acc;
}

// Largest s with v_p((p (s-1))!) <= n-1-j, computed by counting factors directly.
std::uint64_t largest_s(std::uint32_t p, std::uint32_t n, std::uint32_t j) {
  auto np = [p](std::uint64_t s) {
    std::uint64_t count = 0;
    for (std::uint64_t k = 1; k <= p * s; ++k)
      for (std::uint64_t m = k; m % p == 0; m /= p) ++count;
    return count;
  };
  std::uint64_t s = 1;
  while (np(s) <= n - 1 - j) ++s;
  return s;
}

}  // namespace

class WittSweep : public ::testing::TestWithParam<std::pair<std::uint32_t, std::uint32_t>> {};

TEST_P(WittSweep, ConstantVectorsMatchIntegersModPn) {
  const auto [p, n] = GetParam();
  const WittTablePtr T = witt_table(p, n);
  const FieldPtr F = finite_field(p, 1);
  const mpz_class pn = ipow(p, n);
  std::mt19937_64 rng(p * 10 + n);
  for (int t = 0; t < 200; ++t) {
    const WittVector x = constant_vector(T, F, rng), y = constant_vector(T, F, rng);
    EXPECT_EQ(to_integer(witt_add(x, y), p), (to_integer(x, p) + to_integer(y, p)) % pn);
    EXPECT_EQ(to_integer(witt_mul(x, y), p), (to_integer(x, p) * to_integer(y, p)) % pn);
    EXPECT_EQ(to_integer(witt_times_p(x), p), (p * to_integer(x, p)) % pn);
  }
  for (long k = -30; k < 60; ++k) {
    mpz_class want = mpz_class(k) % pn;
    if (want < 0) want += pn;
    EXPECT_EQ(to_integer(WittVector::from_integer(T, F, k), p), want) << k;
  }
}

TEST_P(WittSweep, GhostIdentitiesAtIntegerPoints) {
  const auto [p, n] = GetParam();
  const WittTablePtr T = witt_table(p, n);
  std::mt19937_64 rng(p + n);
  for (int t = 0; t < 30; ++t) {
    std::vector<mpz_class> x(n), y(n), xy;
    for (auto& v : x) v = static_cast<long>(rng() % 11) - 5;
    for (auto& v : y) v = static_cast<long>(rng() % 11) - 5;
    xy = x;
    xy.insert(xy.end(), y.begin(), y.end());
    std::vector<mpz_class> s(n), pr(n);
    for (std::uint32_t m = 0; m < n; ++m) {
      s[m] = eval(T->add_poly(m), xy);
      pr[m] = eval(T->mul_poly(m), xy);
    }
    for (std::uint32_t m = 0; m < n; ++m) {
      EXPECT_EQ(ghost(s, p, m), ghost(x, p, m) + ghost(y, p, m));
      EXPECT_EQ(ghost(pr, p, m), ghost(x, p, m) * ghost(y, p, m));
    }
  }
}

TEST_P(WittSweep, TimesPIsRepeatedAddition) {
  const auto [p, n] = GetParam();
  const WittTablePtr T = witt_table(p, n);
  const FieldPtr F = finite_field(p, 2);
  std::mt19937_64 rng(7 * p + n);
  for (int t = 0; t < 20; ++t) {
    const WittVector x = random_vector(T, F, rng);
    WittVector acc = WittVector::zero(T, F);
    for (std::uint32_t k = 0; k < p; ++k) acc = witt_add(acc, x);
    EXPECT_EQ(witt_times_p(x), acc);
    EXPECT_EQ(witt_scale(x, p), acc);
  }
}

TEST_P(WittSweep, RingAxiomsOnSeries) {
  const auto [p, n] = GetParam();
  const WittTablePtr T = witt_table(p, n);
  const FieldPtr F = finite_field(p, 1);
  std::mt19937_64 rng(3 * p + n);
  for (int t = 0; t < 10; ++t) {
    const WittVector x = random_vector(T, F, rng), y = random_vector(T, F, rng), z = random_vector(T, F, rng);
    EXPECT_EQ(witt_add(x, y), witt_add(y, x));
    EXPECT_EQ(witt_mul(x, witt_add(y, z)), witt_add(witt_mul(x, y), witt_mul(x, z)));
    EXPECT_TRUE(witt_add(x, witt_neg(x)).is_zero());
    EXPECT_EQ(witt_frobenius(witt_mul(x, y)), witt_mul(witt_frobenius(x), witt_frobenius(y)));
  }
}

INSTANTIATE_TEST_SUITE_P(SmallPrimes, WittSweep,
                         ::testing::Values(std::pair{2u, 1u}, std::pair{2u, 2u}, std::pair{2u, 3u}, std::pair{3u, 2u},
                                           std::pair{3u, 3u}, std::pair{5u, 2u}, std::pair{5u, 3u}));

TEST(Witt, TeichmullerIsMultiplicative) {
  const WittTablePtr T = witt_table(3, 3);
  const FieldPtr F = finite_field(3, 1);
  const auto a = parse_series("u^1/2 + 2*u", F), b = parse_series("1 + u^3", F);
  EXPECT_EQ(witt_mul(WittVector::teichmuller(T, a), WittVector::teichmuller(T, b)), WittVector::teichmuller(T, a * b));
}

TEST(Witt, LegendreCounts) {
  EXPECT_EQ(legendre_np(1, 2), 1u);
  EXPECT_EQ(legendre_np(2, 2), 3u);
  EXPECT_EQ(legendre_np(3, 3), 4u);
  EXPECT_EQ(legendre_np(5, 5), 6u);
}

TEST(Ideal, ConstraintsMatchDirectCount) {
  for (std::uint32_t p : {2u, 3u, 5u, 7u})
    for (std::uint32_t n = 1; n <= 4; ++n) {
      const auto cons = ideal_constraints(p, n);
      ASSERT_EQ(cons.size(), n);
      for (const auto& [s, j] : cons) EXPECT_EQ(s, largest_s(p, n, static_cast<std::uint32_t>(j)))
          << "p=" << p << " n=" << n << " j=" << j;
    }
}

TEST(Ideal, SmallLevelsHaveClosedForms) {
  // I_{2,i}: v(r_0) >= 2i, v(r_1) >= p i. I_{3,i}: (2i, 4i, 4i) for p = 2 and (3i, 2pi, p^2 i) otherwise.
  auto weights = [](std::uint32_t p, std::uint32_t n) {
    std::vector<std::uint64_t> w(n);
    for (const auto& [s, j] : ideal_constraints(p, n)) {
      std::uint64_t pj = 1;
      for (std::size_t k = 0; k < j; ++k) pj *= p;
      w[j] = s * pj;
    }
    return w;
  };
  for (std::uint32_t p : {2u, 3u, 5u}) EXPECT_EQ(weights(p, 2), (std::vector<std::uint64_t>{2, p}));
  EXPECT_EQ(weights(2, 3), (std::vector<std::uint64_t>{2, 4, 4}));
  EXPECT_EQ(weights(3, 3), (std::vector<std::uint64_t>{3, 6, 9}));
  EXPECT_EQ(weights(5, 3), (std::vector<std::uint64_t>{3, 10, 25}));
}

TEST(Ideal, LowerIndexIsMembershipThreshold) {
  for (std::uint32_t p : {2u, 3u})
    for (std::uint32_t n : {1u, 2u, 3u}) {
      const WittTablePtr T = witt_table(p, n);
      const FieldPtr F = finite_field(p, 1);
      std::mt19937_64 rng(p * 5 + n);
      for (int t = 0; t < 30; ++t) {
        std::vector<PuiseuxSeries> c;
        for (std::uint32_t j = 0; j < n; ++j)
          c.push_back(rng() % 4 == 0 ? PuiseuxSeries()
                                     : PuiseuxSeries::monomial(F, 1, Rational(static_cast<long>(rng() % 40), 12)));
        const WittVector x(T, c);
        const ExtRational li = lower_index(x);
        for (long k = 1; k <= 48; ++k) {
          const Rational i(k, 48);
          EXPECT_EQ(ideal_membership(x, IdealParameters(i, n)), ExtRational(i) <= li) << x.str() << " at " << i;
        }
      }
    }
}

TEST(Ideal, RejectsParameterOutsideUnitInterval) {
  EXPECT_THROW(IdealParameters(Rational(0), 2), SemanticError);
  EXPECT_THROW(IdealParameters(Rational(3, 2), 2), SemanticError);
  EXPECT_THROW(IdealParameters(Rational(1, 2), 0), SemanticError);
}

TEST(Ideal, LiftFromLowerLevel) {
  // r in I_{n-1, p i} built from valuations; appending u^{i p^{n-1}} r_{n-1} lands in I_{n, i}.
  for (std::uint32_t n : {2u, 3u})
    for (std::uint32_t p : {2u, 3u, 5u}) {
      const FieldPtr F = finite_field(p, 1);
      const WittTablePtr lower = witt_table(p, n - 1), upper = witt_table(p, n);
      std::mt19937_64 rng(n * 100 + p);
      for (int t = 0; t < 50; ++t) {
        const Rational i(1, static_cast<long>(p * (1 + rng() % 4)));
        std::vector<PuiseuxSeries> r;
        Rational pj(1);
        for (std::uint32_t j = 0; j + 1 < n; ++j, pj *= Rational(static_cast<long>(p))) {
          const Rational floor_v = Rational(static_cast<long>(largest_s(p, n - 1, j))) * Rational(static_cast<long>(p)) * i * pj;
          r.push_back(PuiseuxSeries::monomial(F, 1 + rng() % (p - 1), floor_v + Rational(static_cast<long>(rng() % 3), 5)));
        }
        ASSERT_TRUE(ideal_membership(WittVector(lower, r), IdealParameters(Rational(static_cast<long>(p)) * i, n - 1)));
        const Rational shift = i * pj;
        r.push_back(PuiseuxSeries::monomial(F, 1, Rational(static_cast<long>(rng() % 5), 7)).shifted(shift));
        EXPECT_TRUE(ideal_membership(WittVector(upper, r), IdealParameters(i, n)));
      }
    }
}
