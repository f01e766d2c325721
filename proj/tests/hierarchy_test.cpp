#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "piih/hierarchy.hpp"

using namespace piih;

namespace {

Rational R(long a, long b = 1) { return make_rational(a, b); }

DiffPoly d(const std::string& v, unsigned k) { return DiffPoly::derivative_symbol(v, k); }
DiffPoly s_q() {
  DiffPoly p("q");
  p.add(DiffMonomial{1, {1}}, 1);
  return p;
}

// Displayed members, written out term by term.
DiffPoly member1() {
  auto q = d("q", 0);
  return d("q", 2) - R(2) * q.pow(3);
}
DiffPoly member2() {
  auto q = d("q", 0), q1 = d("q", 1), q2 = d("q", 2);
  return d("q", 4) - R(10) * q * q1.pow(2) - R(10) * q.pow(2) * q2 + R(6) * q.pow(5);
}
DiffPoly member3() {
  auto q = d("q", 0), q1 = d("q", 1), q2 = d("q", 2), q3 = d("q", 3), q4 = d("q", 4);
  return d("q", 6) - R(14) * q.pow(2) * q4 - R(56) * q * q1 * q3 - R(70) * q1.pow(2) * q2 -
         R(42) * q * q2.pow(2) + R(70) * q.pow(4) * q2 + R(140) * q.pow(3) * q1.pow(2) - R(20) * q.pow(7);
}

DiffPoly tail(const Rational& alpha) { return DiffPoly::constant("q", alpha) - s_q(); }

}  // namespace

TEST(TotalDerivative, Examples) {
  auto q = d("q", 0);
  EXPECT_EQ(total_derivative(q * q), R(2) * q * d("q", 1));
  EXPECT_EQ(total_derivative(s_q()), q + DiffPoly::s_power("q", 1) * d("q", 1));
  auto f = d("f", 0);
  EXPECT_EQ(total_derivative(d("f", 2) + R(3) * f * f), d("f", 3) + R(6) * f * d("f", 1));
}

TEST(Integrate, Examples) {
  auto f = d("f", 0);
  EXPECT_EQ(integrate_diffpoly(d("f", 1)), f);
  EXPECT_EQ(integrate_diffpoly(d("f", 3) + R(6) * f * d("f", 1)), d("f", 2) + R(3) * f * f);
  EXPECT_THROW(integrate_diffpoly(f), IntegrationError);
  EXPECT_THROW(integrate_diffpoly(d("f", 1).pow(2)), IntegrationError);
}

TEST(Lenard, FirstDensities) {
  auto f = d("f", 0), f1 = d("f", 1), f2 = d("f", 2);
  EXPECT_EQ(lenard(0), DiffPoly::constant("f", R(1, 2)));
  EXPECT_EQ(lenard(1), f);
  EXPECT_EQ(lenard(2), f2 + R(3) * f * f);
  EXPECT_EQ(lenard(3), d("f", 4) + R(10) * f * f2 + R(5) * f1 * f1 + R(10) * f.pow(3));
  EXPECT_THROW(lenard(7), DomainError);
  EXPECT_NO_THROW(lenard(8, 8));
}

TEST(Lenard, RecursionCloses) {
  auto f = d("f", 0), f1 = d("f", 1);
  for (unsigned j = 0; j < kDefaultMaxLenard; ++j) {
    DiffPoly L = lenard(j);
    DiffPoly rhs = total_derivative(L, 3) + R(4) * f * total_derivative(L) + R(2) * f1 * L;
    EXPECT_EQ(total_derivative(lenard(j + 1)), rhs) << j;
  }
}

TEST(Substitute, Examples) {
  auto q = d("q", 0), q1 = d("q", 1);
  auto f = d("f", 0);
  EXPECT_EQ(substitute(f, q1 - q * q), q1 - q * q);
  EXPECT_EQ(substitute(f * f, q), q * q);
  DiffPoly expect = d("q", 3) - R(2) * q * d("q", 2) + q1 * q1 - R(6) * q * q * q1 + R(3) * q.pow(4);
  EXPECT_EQ(substitute(d("f", 2) + R(3) * f * f, q1 - q * q), expect);
}

TEST(Substitute, CommutesWithDerivative) {
  auto q = d("q", 0), q1 = d("q", 1);
  for (unsigned j = 0; j <= 4; ++j) {
    DiffPoly p = lenard(j);
    EXPECT_EQ(substitute(total_derivative(p), q1 - q * q), total_derivative(substitute(p, q1 - q * q)));
  }
}

TEST(BuildHierarchy, DisplayedMembers) {
  const Rational a = R(3, 7), t1 = R(-2, 5), t2 = R(11, 3);
  auto e1 = build_hierarchy_eq(1, {}, a);
  EXPECT_EQ(e1.lhs_minus_rhs, member1() + tail(a));
  auto e2 = build_hierarchy_eq(2, {t1}, a);
  EXPECT_EQ(e2.lhs_minus_rhs, member2() + t1 * member1() + tail(a));
  auto e3 = build_hierarchy_eq(3, {t1, t2}, a);
  EXPECT_EQ(e3.lhs_minus_rhs, member3() + t2 * member2() + t1 * member1() + tail(a));
}

TEST(BuildHierarchy, LeadingDerivative) {
  for (unsigned n = 1; n <= 5; ++n) {
    auto e = build_hierarchy_eq(n, std::vector<Rational>(n - 1, R(1, 3)));
    EXPECT_EQ(e.lhs_minus_rhs.max_order(), static_cast<int>(2 * n));
    EXPECT_EQ(e.lhs_minus_rhs.coefficient(d("q", 2 * n).terms().begin()->first), R(1));
  }
  EXPECT_THROW(build_hierarchy_eq(2, {}), DomainError);
  EXPECT_THROW(build_hierarchy_eq(0, {}), DomainError);
}

TEST(Render, TextMatchesCliExample) {
  auto e = build_hierarchy_eq(2, {R(1)});
  EXPECT_EQ(render_text(e, {false, true}),
            "q'''' - 10*q*q'^2 - 10*q^2*q'' + 6*q^5 + 1*(q'' - 2*q^3) - s*q + alpha = 0");
  EXPECT_EQ(render_text(build_hierarchy_eq(1, {}, R(-1, 2))), "q'' - 2*q^3 - s*q - 1/2 = 0");
  EXPECT_EQ(render_text(build_hierarchy_eq(2, {R(-3)}), {true, false}),
            "q'''' - 10*q*q'^2 - 10*q^2*q'' + 6*q^5 + tau1*(q'' - 2*q^3) - s*q = 0");
}

TEST(Render, Latex) {
  auto e = build_hierarchy_eq(1, {});
  EXPECT_EQ(render_latex(e, {false, true}), "q'' - 2q^{3} - sq + \\alpha = 0");
}

TEST(EvalResidual, ZeroFunction) {
  for (unsigned n = 1; n <= 3; ++n) {
    auto e = build_hierarchy_eq(n, std::vector<Rational>(n - 1, R(1)));
    std::vector<double> zeros(60, 0.0);
    auto r = eval_residual(e, -3.0, 0.1, zeros);
    EXPECT_FALSE(r.s.empty());
    EXPECT_EQ(r.max_abs(), 0.0);
  }
}

TEST(EvalResidual, GridTooSmall) {
  auto e = build_hierarchy_eq(2, {R(0)});
  std::vector<double> v(5, 0.0);
  EXPECT_THROW(eval_residual(e, 0.0, 0.1, v), DomainError);
}

TEST(EvalResidual, LeadingAsymptoticTerm) {
  // q = sqrt(-s/2) kills 2q^3 + sq, leaving q'' = -(1/(4 sqrt2)) (-s)^(-3/2).
  auto e = build_hierarchy_eq(1, {});
  const double s0 = -40.0, h = 0.01;
  std::vector<double> v;
  for (int i = 0; i <= 1000; ++i) v.push_back(std::sqrt(-(s0 + h * i) / 2.0));
  auto r = eval_residual(e, s0, h, v);
  for (std::size_t i = 0; i < r.s.size(); ++i) {
    double exact = -std::pow(-r.s[i], -1.5) / (4.0 * std::sqrt(2.0));
    EXPECT_NEAR(r.residual[i], exact, 1e-9);
  }
}

TEST(EvalResidual, ReciprocalFunction) {
  // q = 1/s: q'' = 2/s^3 = 2q^3, so E = -s q = -1.
  auto e = build_hierarchy_eq(1, {});
  const double s0 = 1.0, h = 0.005;
  std::vector<double> v;
  for (int i = 0; i <= 400; ++i) v.push_back(1.0 / (s0 + h * i));
  auto r = eval_residual(e, s0, h, v, 8);
  for (double x : r.residual) EXPECT_NEAR(x, -1.0, 1e-8);
}

TEST(SeriesResidual, DominantBalance) {
  auto e = build_hierarchy_eq(1, {});
  AsymSeries good;
  good.n = 1;
  good.push(R(1, 2), AlgElem::beta_power(1, -1));  // 2^(-1/2)
  auto r = series_residual(e, good, 1);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].exponent, R(3, 2));
  EXPECT_TRUE(r[0].coefficient.is_zero());

  AsymSeries bad;
  bad.n = 1;
  bad.push(R(1, 2), AlgElem(1, R(1)));
  auto rb = series_residual(e, bad, 1);
  EXPECT_EQ(rb[0].coefficient, AlgElem(1, R(-1)));
}

TEST(SeriesResidual, OffGridAndAlpha) {
  auto e = build_hierarchy_eq(1, {});
  AsymSeries s;
  s.n = 1;
  s.push(R(1), AlgElem(1, R(1)));
  EXPECT_THROW(series_residual(e, s, 1), DomainError);
  AsymSeries ok;
  ok.n = 1;
  ok.push(R(1, 2), AlgElem(1, R(1)));
  EXPECT_THROW(series_residual(build_hierarchy_eq(1, {}, R(1)), ok, 1), DomainError);
}

TEST(SeriesResidual, SecondOrderCorrectionN1) {
  // q = th0 t^(1/2) + c t^(-5/2). At t^(-3/2): q'' gives -(1/4) th0, -2q^3 gives -6 th0^2 c,
  // t q gives c. With th0^2 = 1/2: -(1/4) th0 - 2c = 0, so c = -th0/8.
  auto e = build_hierarchy_eq(1, {});
  AsymSeries s;
  s.n = 1;
  const AlgElem th0 = AlgElem::beta_power(1, -1);
  s.push(R(1, 2), th0);
  s.push(R(-5, 2), th0 * R(-1, 8));
  auto r = series_residual(e, s, 4);
  ASSERT_EQ(r.size(), 4u);
  EXPECT_EQ(r[3].exponent, R(-3, 2));
  for (const auto& t : r) EXPECT_TRUE(t.coefficient.is_zero()) << to_string(t.exponent);
  s.terms.back().second = th0 * R(-1, 4);
  EXPECT_FALSE(series_residual(e, s, 4)[3].coefficient.is_zero());
}
