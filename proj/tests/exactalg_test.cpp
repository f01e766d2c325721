#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "piih/algelem.hpp"
#include "piih/laurent.hpp"

using namespace piih;

namespace {

Rational R(long a, long b = 1) { return make_rational(a, b); }

AlgElem random_elem(std::mt19937_64& rng, unsigned n, bool nonzero = false) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
  for (;;) {
    std::vector<Rational> c(2 * n);
    for (auto& x : c) x = R(num(rng), den(rng));
    AlgElem e(n, c);
    if (!nonzero || !e.is_zero()) return e;
  }
}

}  // namespace

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(parse_rational("-3/6"), R(-1, 2));
  EXPECT_EQ(parse_rational("0.25"), R(1, 4));
  EXPECT_EQ(parse_rational("-1.5e1"), R(-15));
  EXPECT_EQ(to_string(R(6, -4)), "-3/2");
  EXPECT_THROW(parse_rational("1/0"), DomainError);
  EXPECT_THROW(parse_rational("abc"), DomainError);
}

TEST(Rational, ExactRoots) {
  EXPECT_EQ(*exact_root(R(16, 81), 4), R(2, 3));
  EXPECT_FALSE(exact_root(R(2), 2).has_value());
  EXPECT_EQ(binomial(6, 3), 20);
}

TEST(AlgElem, BetaPowersReduce) {
  // n = 2: beta^4 = 6
  EXPECT_EQ(AlgElem::beta_power(2, 4), AlgElem(2, R(6)));
  EXPECT_EQ(AlgElem::beta_power(2, 5), AlgElem::beta_power(2, 1) * R(6));
  EXPECT_EQ(AlgElem::beta_power(2, -1) * AlgElem::beta_power(2, 1), AlgElem(2, R(1)));
  EXPECT_EQ(AlgElem::beta_power(3, -7), AlgElem::beta_power(3, 5) * R(1, 400));
}

TEST(AlgElem, FieldAxiomsOnRandomTriples) {
  std::mt19937_64 rng(20240611);
  for (unsigned n = 1; n <= 4; ++n) {
    for (int trial = 0; trial < 15; ++trial) {
      AlgElem a = random_elem(rng, n), b = random_elem(rng, n), c = random_elem(rng, n, true);
      EXPECT_EQ((a * b) * c, a * (b * c));
      EXPECT_EQ(a * (b + c), a * b + a * c);
      EXPECT_EQ(c * c.inverse(), AlgElem(n, R(1)));
      EXPECT_EQ((a + b) - b, a);
    }
  }
}

TEST(AlgElem, ZeroHasNoInverse) { EXPECT_THROW(AlgElem(2).inverse(), DomainError); }

TEST(AlgElem, MixedFieldsRejected) { EXPECT_THROW(AlgElem(1) + AlgElem(2), DomainError); }

TEST(AlgToFloat, Examples) {
  EXPECT_EQ(alg_to_float(AlgElem(3)), 0.0);
  EXPECT_NEAR(alg_to_float(AlgElem::beta_power(1, 1)), std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(alg_to_float(AlgElem::beta_power(2, 2)), std::sqrt(6.0), 1e-12);
  EXPECT_NEAR(alg_to_float(AlgElem::beta_power(3, 1)), std::cbrt(std::sqrt(20.0)), 1e-12);
  EXPECT_NEAR(alg_to_float(AlgElem::beta_power(2, 2), 1e-60), 2.449489742783178, 1e-15);
}

TEST(AlgElem, HumanForm) {
  EXPECT_EQ(to_human(AlgElem(2, R(-1, 12))), "-(1/12)");
  EXPECT_EQ(to_human(AlgElem::beta_power(2, 2) * R(-1, 54)), "-(1/54)*beta^2");
  EXPECT_EQ(to_human(AlgElem::beta_power(2, 1)), "beta");
  EXPECT_EQ(to_human(AlgElem(2)), "0");
  EXPECT_EQ(to_human(AlgElem(2, R(1, 2)) + AlgElem::beta_power(2, 1) * R(-3)), "((1/2) - (3)*beta)");
}

TEST(FracPowerExpand, ExactSquareRoot) {
  // z^2, r = 1/2, order 0 -> z
  auto s = frac_power_expand(lift(1, {R(0), R(0), R(1)}), R(1, 2), 0);
  ASSERT_EQ(s.terms().size(), 1u);
  EXPECT_EQ(s.coefficient(R(1)), AlgElem(1, R(1)));
  EXPECT_EQ(s.coefficient(R(0)), AlgElem(1));
}

TEST(FracPowerExpand, QuarticFourthRoot) {
  // (6z^4 - 2z^2)^(1/4) = beta*z*(1 + u)^(1/4), u = -(1/3) z^-2.
  // Binomial series by hand: (1+u)^(1/4) = 1 + u/4 + O(u^2)  ->  z^-1 coefficient beta*(1/4)*(-1/3).
  const Rational oracle = R(1, 4) * R(-1, 3);
  auto s = frac_power_expand(lift(2, {R(0), R(0), R(-2), R(0), R(6)}), R(1, 4), -1);
  EXPECT_EQ(s.coefficient(R(1)), AlgElem::beta_power(2, 1));
  EXPECT_EQ(s.coefficient(R(0)), AlgElem(2));
  EXPECT_EQ(s.coefficient(R(-1)), AlgElem::beta_power(2, 1) * oracle);
  EXPECT_EQ(oracle, R(-1, 12));
  EXPECT_EQ(residue_at_infinity(s), AlgElem::beta_power(2, 1) * R(1, 12));
}

TEST(FracPowerExpand, QuadraticSquareRoot) {
  // (6z^2 - 2z)^(1/2) = sqrt6*z*(1+u)^(1/2), u = -(1/3) z^-1:
  // 1 + u/2 - u^2/8 = 1 - z^-1/6 - z^-2/72.
  auto s = frac_power_expand(lift(2, {R(0), R(-2), R(6)}), R(1, 2), -1);
  const AlgElem sqrt6 = AlgElem::beta_power(2, 2);
  EXPECT_EQ(s.coefficient(R(1)), sqrt6);
  EXPECT_EQ(s.coefficient(R(0)), sqrt6 * R(-1, 6));
  EXPECT_EQ(s.coefficient(R(-1)), sqrt6 * R(-1, 72));
  EXPECT_EQ(residue_at_infinity(s), sqrt6 * R(1, 72));
}

TEST(FracPowerExpand, RamifiedExponents) {
  // (z + 1)^(1/2) = z^(1/2) (1 + 1/(2z) - 1/(8z^2) + ...)
  auto s = frac_power_expand(lift(1, {R(1), R(1)}), R(1, 2), -2);
  EXPECT_EQ(s.ramification(), 2);
  EXPECT_EQ(s.coefficient(R(1, 2)), AlgElem(1, R(1)));
  EXPECT_EQ(s.coefficient(R(-1, 2)), AlgElem(1, R(1, 2)));
  EXPECT_EQ(s.coefficient(R(-3, 2)), AlgElem(1, R(-1, 8)));
  EXPECT_EQ(s.coefficient(R(-1)), AlgElem(1));
  EXPECT_EQ(residue_at_infinity(s), AlgElem(1));
}

TEST(FracPowerExpand, AlgebraicCoefficients) {
  // p = beta^2 z^2 + beta z in n = 2: exercises the non-rational path.
  AlgPoly p{AlgElem(2), AlgElem::beta_power(2, 1), AlgElem::beta_power(2, 2)};
  auto half = frac_power_expand(p, R(1, 2), -6);
  auto sq = half * half;
  EXPECT_EQ(sq.coefficient(R(2)), AlgElem::beta_power(2, 2));
  EXPECT_EQ(sq.coefficient(R(1)), AlgElem::beta_power(2, 1));
  for (int e = 0; e >= -5; --e) EXPECT_TRUE(sq.coefficient(R(e)).is_zero()) << e;
}

TEST(FracPowerExpand, Errors) {
  // 2^(1/2) is not in Q(6^(1/4))
  EXPECT_THROW(frac_power_expand(lift(2, {R(0), R(0), R(2)}), R(1, 2), 0), UnrepresentableFieldError);
  EXPECT_THROW(frac_power_expand(lift(2, {R(0), R(0), R(-6)}), R(1, 2), 0), UnrepresentableFieldError);
  EXPECT_THROW(frac_power_expand(lift(1, {R(1), R(1)}), R(1, 2), -100000), DomainError);
  auto coarse = frac_power_expand(lift(1, {R(1), R(1)}), R(1, 2), 0);
  EXPECT_THROW(residue_at_infinity(coarse), InsufficientOrderError);
}

TEST(Residue, NoInverseTermGivesZero) {
  auto s = frac_power_expand(lift(2, {R(0), R(0), R(0), R(0), R(6)}), R(1, 4), -3);
  EXPECT_TRUE(residue_at_infinity(s).is_zero());
}

TEST(FracPowerExpand, ComplementaryPowersMultiplyBack) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> num(-6, 6), den(1, 5), deg(1, 5), rnum(1, 7), rden(2, 8);
  for (unsigned n = 1; n <= 4; ++n) {
    for (int trial = 0; trial < 6; ++trial) {
      int d = deg(rng);
      std::vector<Rational> c(static_cast<std::size_t>(d) + 1);
      for (auto& x : c) x = R(num(rng), den(rng));
      c.back() = 1;  // monic
      Rational r = R(rnum(rng), rden(rng));
      const int order = -4;
      auto a = frac_power_expand(lift(n, c), r, order);
      auto b = frac_power_expand(lift(n, c), Rational(1) - r, order);
      auto prod = a * b;
      // compare against p exactly on every resolved exponent
      for (int e = d; e * prod.ramification() >= prod.truncation(); --e) {
        Rational expect = (e >= 0 && e <= d) ? c[static_cast<std::size_t>(e)] : Rational(0);
        EXPECT_EQ(prod.coefficient(R(e)), AlgElem(n, expect)) << "n=" << n << " r=" << to_string(r) << " e=" << e;
      }
      // resolved at least down to order + max(r, 1-r) * d
      Rational bound = (Rational(order) + std::max(r, Rational(1) - r) * d) * prod.ramification();
      EXPECT_LE(Rational(prod.truncation()), bound) << "d=" << d << " r=" << to_string(r);
    }
  }
}

TEST(Residue, LinearOverField) {
  std::mt19937_64 rng(5);
  auto s1 = frac_power_expand(lift(2, {R(1), R(-3), R(0), R(2), R(6)}), R(3, 4), -2);
  auto s2 = frac_power_expand(lift(2, {R(0), R(5), R(6)}), R(1, 2), -2);
  for (int trial = 0; trial < 5; ++trial) {
    AlgElem a = random_elem(rng, 2), b = random_elem(rng, 2);
    LaurentSeries comb(2);
    comb.set_truncation(-2);
    for (const auto& [k, c] : s1.terms()) comb.add_term(k, a * c);
    for (const auto& [k, c] : s2.terms()) comb.add_term(k, b * c);
    EXPECT_EQ(residue_at_infinity(comb), a * residue_at_infinity(s1) + b * residue_at_infinity(s2));
  }
}
