#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "piih/specfun.hpp"

using namespace piih;

namespace {

// Maclaurin series of the classical Airy function, in extended precision.
double airy_series(double xd) {
  const long double x = xd;
  const long double c1 = 0.355028053887817239260063186004183L;   // Ai(0)
  const long double c2 = 0.258819403792806798405183560189203L;   // -Ai'(0)
  long double f = 1.0L, g = x, tf = 1.0L, tg = x;
  const long double x3 = x * x * x;
  for (int k = 1; k < 400; ++k) {
    tf *= x3 / ((3.0L * k - 1.0L) * (3.0L * k));
    tg *= x3 / ((3.0L * k) * (3.0L * k + 1.0L));
    f += tf;
    g += tg;
    if (std::fabs(tf) + std::fabs(tg) < 1e-30L) break;
  }
  return static_cast<double>(c1 * f - c2 * g);
}

double airy_first_zero() {
  double a = -2.5, b = -2.2;
  for (int i = 0; i < 200; ++i) {
    double m = 0.5 * (a + b);
    if ((airy_series(a) < 0) == (airy_series(m) < 0)) a = m;
    else b = m;
  }
  return 0.5 * (a + b);
}

}  // namespace

TEST(Quadrature, GaussLegendreIsExactForPolynomials) {
  const auto& r = quad::gauss_legendre(7);
  for (int k = 0; k <= 13; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) acc += r.weights[i] * std::pow(r.nodes[i], k);
    double exact = (k % 2) ? 0.0 : 2.0 / (k + 1);
    EXPECT_NEAR(acc, exact, 1e-14) << k;
  }
}

TEST(Quadrature, TanhSinhIntegratesEndpointSingularity) {
  auto r = quad::mapped(quad::tanh_sinh(80), 0.0, 1.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) acc += r.weights[i] / std::sqrt(r.nodes[i]);
  EXPECT_NEAR(acc, 2.0, 1e-6);
}

TEST(Phi, AiryAtZero) {
  ModelParams p;
  EXPECT_NEAR(phi(p, 0.0), 0.3550280539, 1e-10);
  EXPECT_NEAR(ai_gen(p, 0.0), std::pow(3.0, -2.0 / 3.0) / std::tgamma(2.0 / 3.0), 1e-13);
  EXPECT_NEAR(phi_at_zero_monomial(1), std::pow(3.0, -2.0 / 3.0) / std::tgamma(2.0 / 3.0), 1e-14);
}

TEST(Phi, MonomialClosedFormAtZero) {
  for (unsigned n = 1; n <= 4; ++n) {
    ModelParams p{n, std::vector<double>(n - 1, 0.0)};
    EXPECT_NEAR(phi(p, 0.0), phi_at_zero_monomial(n), 1e-12) << n;
  }
  EXPECT_NEAR(phi_at_zero_monomial(2),
              std::pow(5.0, -0.8) * std::tgamma(0.2) * std::cos(std::numbers::pi / 10) / std::numbers::pi, 1e-15);
}

TEST(Phi, AgreesWithAiryOnWindow) {
  ModelParams p;
  double worst = 0.0;
  for (double x = -8.0; x <= 4.0; x += 0.125) worst = std::max(worst, std::abs(phi(p, x) - airy_series(x)));
  EXPECT_LT(worst, 1e-8);
}

TEST(Phi, RightTailDecays) {
  ModelParams p;
  const double v = phi(p, 10.0);
  EXPECT_LT(std::abs(v), 1e-9);
  const double tail = std::exp(-2.0 / 3.0 * std::pow(10.0, 1.5)) / (2.0 * std::sqrt(std::numbers::pi) * std::pow(10.0, 0.25));
  EXPECT_NEAR(v / tail, 1.0, 0.02);  // leading-order tail, corrections O(x^-1.5)
}

TEST(Phi, FirstAiryZero) {
  ModelParams p;
  const double z = airy_first_zero();
  EXPECT_NEAR(z, -2.338107410459767, 1e-9);
  EXPECT_LT(std::abs(ai_gen(p, z)), 1e-7);
}

TEST(Phi, DerivativesMatchFiniteDifferences) {
  ModelParams p{2, {0.7}};
  const double h = 1e-3;
  for (double x : {-2.0, 0.3, 1.5}) {
    double fd = (phi(p, x + h) - phi(p, x - h)) / (2 * h);
    EXPECT_NEAR(phi(p, x, 1), fd, 1e-6);
  }
}

TEST(Phi, RealityAndContourIndependenceWithTaus) {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> tau(-2.0, 2.0), xs(-4.0, 4.0);
  for (unsigned n = 1; n <= 3; ++n) {
    for (int trial = 0; trial < 6; ++trial) {
      ModelParams p{n, {}};
      for (unsigned j = 1; j < n; ++j) p.taus.push_back(tau(rng));
      const double x = xs(rng);
      auto base = phi_eval(p, x);
      EXPECT_LT(std::abs(base.imag) / (1.0 + std::abs(base.value)), 1e-10);
      ContourSpec wider;
      wider.radius = 2.0 * base.radius;
      wider.nodes = 400;
      ContourSpec tilted;
      tilted.angle = 0.75 * std::numbers::pi / (2.0 * (2.0 * n + 1.0));
      tilted.nodes = 300;
      const double tol = std::max(base.err_estimate, 1e-13);
      EXPECT_NEAR(phi(p, x, 0, wider), base.value, tol) << "n=" << n << " x=" << x;
      EXPECT_NEAR(phi(p, x, 0, tilted), base.value, 10 * tol) << "n=" << n << " x=" << x;
    }
  }
}

TEST(Phi, TanhSinhRuleAgrees) {
  ModelParams p{2, {-0.5}};
  ContourSpec ts;
  ts.rule = QuadRule::TanhSinh;
  ts.nodes = 300;
  for (double x : {-3.0, 0.0, 2.0}) EXPECT_NEAR(phi(p, x, 0, ts), phi(p, x), 1e-12);
}

TEST(Phi, Errors) {
  ModelParams bad{2, {}};
  EXPECT_THROW(phi(bad, 0.0), DomainError);
  ModelParams p;
  ContourSpec cs;
  cs.angle = 2.0;
  EXPECT_THROW(phi(p, 0.0, 0, cs), DomainError);
  ContourSpec huge;
  huge.radius = 30.0;  // integrand overflows at the cut for x very negative
  EXPECT_THROW(phi(p, -2000.0, 0, huge), OverflowError);
  ModelParams rho{1, {}, 1.5};
  EXPECT_THROW(rho.validate(), DomainError);
}

TEST(OdeResidual, Monomial) {
  for (unsigned n = 1; n <= 3; ++n) {
    ModelParams p{n, std::vector<double>(n - 1, 0.0)};
    const double half = n == 1 ? 5.0 : 3.0;
    std::vector<double> xs;
    for (double x = -half; x <= half + 1e-12; x += 0.25) xs.push_back(x);
    auto r = ode_residual_ai(p, xs);
    double worst = 0.0;
    for (double v : r) worst = std::max(worst, std::abs(v));
    EXPECT_LT(worst, n == 1 ? 1e-6 : 1e-5) << n;
  }
  ModelParams deformed{2, {1.0}};
  std::vector<double> xs{0.0};
  EXPECT_THROW(ode_residual_ai(deformed, xs), DomainError);
  EXPECT_NEAR(ode_residual_ai(ModelParams{}, xs)[0], 0.0, 1e-12);
}

TEST(PhiTable, MatchesDirectEvaluation) {
  ModelParams p{2, {0.4}};
  PhiTable t(p, -6.0, 12.0);
  double worst = 0.0;
  for (double x = -6.0; x <= 12.0; x += 0.0173) worst = std::max(worst, std::abs(t(x) - phi(p, x)));
  EXPECT_LT(worst, 1e-12);
  EXPECT_THROW(t(-7.0), DomainError);
}

TEST(PhiTail, PointIsBeyondDecay) {
  ModelParams p;
  const double X = phi_tail_point(p);
  EXPECT_GT(X, 10.0);
  EXPECT_LT(std::abs(phi(p, X)), 1e-15);
}
