#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "piih/algelem.hpp"
#include "piih/asymseries.hpp"
#include "piih/error.hpp"
#include "piih/fredholm.hpp"
#include "piih/hierarchy.hpp"
#include "piih/laurent.hpp"
#include "piih/rational.hpp"

namespace piih {

namespace detail {

inline void check_taus(unsigned n, const std::vector<Rational>& taus) {
  if (n < 1) throw DomainError("n must be >= 1");
  if (taus.size() != n - 1) throw DomainError("expected " + std::to_string(n - 1) + " deformation parameters");
}

/// tau_k with tau_n = 1 and tau_0 = 0.
inline Rational tau_at(unsigned n, const std::vector<Rational>& taus, unsigned k) {
  if (k == n) return 1;
  if (k == 0 || k > n) return 0;
  return taus[k - 1];
}

/// sum_k (-1)^(n-k) binom(2k,k) tau_k z^(stride*k), ascending coefficients.
inline std::vector<Rational> lambda_coeffs(unsigned n, const std::vector<Rational>& taus, unsigned stride) {
  std::vector<Rational> c(stride * n + 1, Rational(0));
  for (unsigned k = 1; k <= n; ++k) {
    Rational v = Rational(binomial(2 * k, k)) * tau_at(n, taus, k);
    c[stride * k] = ((n - k) % 2 == 0) ? v : Rational(-v);
  }
  return c;
}

inline Rational stated_log_coefficient(unsigned n) {
  return n == 1 ? Rational(-1) / Rational(8) : Rational(-1) / Rational(2);
}

}  // namespace detail

/// Which large-gap expansion to build.
///   Stated: the closed form as usually quoted (c = -1/8 or -1/2, no |s|^1 term, q correction c/(2 theta_0)).
///   Consistent: log coefficient forced by the hierarchy's formal solution, the -2 kappa |s| term
///   coming from g_1, and q correction c/(2 theta_0) + theta_(2n+1).
enum class Expansion { Stated, Consistent };

/// theta_0 = binom(2n,n)^(-1/(2n)); theta_i = res lambda^((2i-1)/(2n)) / (2i-1).
inline AlgElem theta(unsigned n, const std::vector<Rational>& taus, unsigned i) {
  detail::check_taus(n, taus);
  if (i == 0) return AlgElem::beta_power(n, -1);
  const int e = 2 * static_cast<int>(i) - 1;
  const auto series = frac_power_expand(lift(n, detail::lambda_coeffs(n, taus, 2)), Rational(e) / Rational(2 * n), -1);
  return residue_at_infinity(series) / Rational(e);
}

/// Residue at infinity of lambda^(k/n) (even powers of the even polynomial).
inline AlgElem lambda_even_power_residue(unsigned n, const std::vector<Rational>& taus, unsigned k) {
  detail::check_taus(n, taus);
  return residue_at_infinity(
      frac_power_expand(lift(n, detail::lambda_coeffs(n, taus, 2)), Rational(k) / Rational(n), -1));
}

/// theta^[2]_i, the coefficients of zeta_0^2; i = 0 gives theta_0^2.
inline AlgElem theta2(unsigned n, const std::vector<Rational>& taus, unsigned i) {
  detail::check_taus(n, taus);
  if (i == 0) return AlgElem::beta_power(n, -2);
  if (i == 1) return AlgElem(n, detail::tau_at(n, taus, n - 1) / Rational(4 * n - 2));
  const auto series =
      frac_power_expand(lift(n, detail::lambda_coeffs(n, taus, 1)), Rational(i - 1) / Rational(n), -1);
  return residue_at_infinity(series) / Rational(i - 1);
}

struct ConvolutionCheck {
  bool ok = true;
  std::optional<unsigned> first_failure;
};

/// theta^[2]_i == sum_k theta_k theta_(i-k) for i <= max_i.
inline ConvolutionCheck theta2_convolution_check(unsigned n, const std::vector<Rational>& taus, unsigned max_i) {
  if (max_i > 32) throw DomainError("convolution check bound is 32");
  std::vector<AlgElem> th;
  for (unsigned i = 0; i <= max_i; ++i) th.push_back(theta(n, taus, i));
  ConvolutionCheck out;
  for (unsigned i = 0; i <= max_i; ++i) {
    AlgElem conv(n);
    for (unsigned k = 0; k <= i; ++k) conv += th[k] * th[i - k];
    if (!(conv == theta2(n, taus, i))) {
      out.ok = false;
      out.first_failure = i;
      return out;
    }
  }
  return out;
}

/// Positive root of sum_k (-1)^(n-k) binom(2k,k) tau_k |s|^((k-n)/n) zeta^(2k) = 1.
inline double zeta0_solve(unsigned n, const std::vector<Rational>& taus, double s, double precision = 1e-15) {
  detail::check_taus(n, taus);
  if (!(s < 0.0)) throw DomainError("zeta0 is defined for s < 0");
  const double abs_s = -s;
  // polynomial in u = zeta^2: g(u) = sum_k a_k u^k - 1
  std::vector<double> a(n + 1, 0.0);
  for (unsigned k = 1; k <= n; ++k) {
    double v = to_double(Rational(binomial(2 * k, k)) * detail::tau_at(n, taus, k));
    if ((n - k) % 2) v = -v;
    a[k] = v * std::pow(abs_s, (static_cast<double>(k) - n) / n);
  }
  auto g = [&](long double u) {
    long double acc = 0;
    for (unsigned k = n; k >= 1; --k) acc = (acc + a[k]) * u;
    return acc - 1;
  };
  auto dg = [&](long double u) {
    long double acc = 0;
    for (unsigned k = n; k >= 1; --k) acc = acc * u + static_cast<long double>(k) * a[k];
    return acc;
  };

  // regime: every real critical point of g must lie below the root
  std::vector<double> crit;
  if (n >= 2) {
    const auto m = static_cast<Eigen::Index>(n - 1);
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index r = 1; r < m; ++r) comp(r, r - 1) = 1.0;
    for (Eigen::Index r = 0; r < m; ++r) comp(r, m - 1) = -(static_cast<double>(r + 1) * a[static_cast<std::size_t>(r + 1)]) / (n * a[n]);
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    for (Eigen::Index r = 0; r < m; ++r) {
      const auto z = es.eigenvalues()(r);
      if (std::abs(z.imag()) <= 1e-9 * (1.0 + std::abs(z.real())) && z.real() > 0.0) crit.push_back(z.real());
    }
  }

  const double th0 = std::pow(to_double(Rational(binomial(2 * n, n))), -1.0 / (2.0 * n));
  // Newton on u seeded at theta_0^2, bisection fallback on [theta_0^2/4, 4 theta_0^2]
  long double u = static_cast<long double>(th0) * th0;
  bool converged = false;
  for (int it = 0; it < 60; ++it) {
    const long double d = dg(u);
    if (!(d > 0)) break;
    const long double step = g(u) / d;
    u -= step;
    if (!(u > 0)) break;
    if (std::abs(static_cast<double>(step)) <= precision * static_cast<double>(u)) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    long double lo = static_cast<long double>(th0) * th0 / 4, hi = static_cast<long double>(th0) * th0 * 4;
    if (!(g(lo) < 0 && g(hi) > 0)) throw RegimeError("no sign change for zeta0; |s| too small for these parameters");
    for (int it = 0; it < 200 && hi - lo > precision * hi; ++it) {
      const long double mid = 0.5L * (lo + hi);
      (g(mid) < 0 ? lo : hi) = mid;
    }
    u = 0.5L * (lo + hi);
  }
  if (!(dg(u) > 0)) throw RegimeError("zeta0 equation is not monotone at its root; |s| too small");
  for (double c : crit)
    if (c >= static_cast<double>(u)) throw RegimeError("zeta0 equation has a critical point past the root; |s| too small");
  // unique positive root: g < 0 on (0, u) follows when g' keeps one sign there or all critical values are negative
  for (double c : crit)
    if (g(c) >= 0) throw RegimeError("zeta0 equation has several positive roots; |s| too small");
  return std::sqrt(static_cast<double>(u));
}

/// c_1..c_n of the g-function and g_1 at a given s < 0.
struct GFunctionCoeffs {
  unsigned n = 1;
  std::vector<Rational> taus;
  double s = 0.0;
  double zeta0 = 0.0;
  std::vector<double> c;  // c[j-1] = c_j
  double g1 = 0.0;

  /// g_1 recomputed from the c_j instead of the closed form.
  double g1_from_c() const {
    const double abs_s = -s;
    double acc = 0.0;
    for (unsigned j = 1; j <= n; ++j) {
      const double w = std::tgamma(j + 1.5) / (std::tgamma(j + 2.0) * std::tgamma(0.5)) * std::pow(zeta0, 2.0 * j + 2);
      acc += ((j % 2) ? 1.0 : -1.0) * c[j - 1] * w;  // (-1)^(j+1): coefficient of zeta^-1 in (zeta^2 - zeta0^2)^(j+1/2)
    }
    return std::pow(abs_s, (2.0 * n + 1) / (2.0 * n)) * acc;
  }

  /// sum_j c_j (-1)^j Gamma(j+3/2)/(j! Gamma(3/2)) zeta0^(2j); equals -1.
  double normalization() const {
    double acc = 0.0;
    for (unsigned j = 1; j <= n; ++j)
      acc += ((j % 2) ? -1.0 : 1.0) * c[j - 1] * std::tgamma(j + 1.5) / (std::tgamma(j + 1.0) * std::tgamma(1.5)) *
             std::pow(zeta0, 2.0 * j);
    return acc;
  }
};

inline GFunctionCoeffs g_coeffs(unsigned n, const std::vector<Rational>& taus, double s) {
  GFunctionCoeffs out;
  out.n = n;
  out.taus = taus;
  out.s = s;
  out.zeta0 = zeta0_solve(n, taus, s);
  const double abs_s = -s, z2 = out.zeta0 * out.zeta0;
  out.c.assign(n, 0.0);
  for (unsigned m = 0; m < n; ++m) {
    double acc = 0.0;
    for (unsigned k = 0; k <= m; ++k) {
      const unsigned idx = n - m + k;
      const double sign = ((m - k) % 2) ? -1.0 : 1.0;
      acc += sign * std::ldexp(1.0, static_cast<int>(2 * idx) - 1) * to_double(detail::tau_at(n, taus, idx)) *
             std::pow(abs_s, -static_cast<double>(m - k) / n) * std::tgamma(idx + 0.5) /
             (std::tgamma(k + 1.0) * std::tgamma(n - m + 1.5)) * std::pow(z2, k);
    }
    out.c[n - m - 1] = acc;
  }
  double g1 = 0.0;
  for (unsigned k = 1; k <= n; ++k) {
    const double sign = ((n - k) % 2) ? -1.0 : 1.0;
    g1 += sign * to_double(detail::tau_at(n, taus, k)) * to_double(Rational(binomial(2 * k, k - 1))) *
          std::pow(abs_s, (2.0 * k + 1) / (2.0 * n)) * std::pow(z2, k + 1);
  }
  out.g1 = 0.5 * g1;
  return out;
}

/// sum_i theta_i |s|^(-i/n), i = 0..depth.
inline AsymSeries zeta0_series(unsigned n, const std::vector<Rational>& taus, unsigned depth) {
  AsymSeries out;
  out.n = n;
  for (unsigned i = 0; i <= depth; ++i) out.push(-Rational(i) / Rational(n), theta(n, taus, i));
  return out;
}

inline constexpr unsigned kMaxSeriesDepth = 24;

/// g_1 ~ sum_{i != n+1} n/(2(n+1-i)) theta^[2]_i |s|^((2n+1-2i)/(2n)) + kappa |s|^(-1/(2n)).
inline AsymSeries g1_series(unsigned n, const std::vector<Rational>& taus, unsigned depth) {
  detail::check_taus(n, taus);
  if (depth > kMaxSeriesDepth) throw DomainError("series depth is capped at " + std::to_string(kMaxSeriesDepth));
  AsymSeries out;
  out.n = n;
  for (unsigned i = 0; i <= depth; ++i) {
    if (i == n + 1) continue;
    const Rational w = Rational(n) / Rational(2 * (static_cast<int>(n) + 1 - static_cast<int>(i)));
    out.push(Rational(2 * static_cast<int>(n) + 1 - 2 * static_cast<int>(i)) / Rational(2 * n), theta2(n, taus, i) * w);
  }
  out.constant = FittedConstant{"kappa", std::nullopt, std::nullopt, -Rational(1) / Rational(2 * n)};
  return out;
}

/// kappa of the g_1 expansion: with Q(z) = sum_k (-1)^(n-k) tau_k binom(2k,k-1) z^(k+1) and
/// z = sigma^2 zeta_0^2, Q(z(sigma)) = 2 sigma g_1, so kappa is half the sigma^0 coefficient.
inline AlgElem g1_kappa(unsigned n, const std::vector<Rational>& taus) {
  detail::check_taus(n, taus);
  // z = sigma^2 Z(x), x = sigma^-2, Z(x) = sum_i theta^[2]_i x^i; the sigma^0 part of z^(k+1) is [x^(k+1)] Z^(k+1)
  std::vector<AlgElem> Z;
  for (unsigned i = 0; i <= n + 1; ++i) Z.push_back(theta2(n, taus, i));
  AlgElem acc(n);
  for (unsigned k = 1; k <= n; ++k) {
    std::vector<AlgElem> P{AlgElem(n, Rational(1))};
    for (unsigned r = 0; r <= k; ++r) {
      std::vector<AlgElem> next(std::min<std::size_t>(P.size() + Z.size() - 1, k + 2), AlgElem(n));
      for (std::size_t a = 0; a < P.size(); ++a)
        for (std::size_t b = 0; b < Z.size() && a + b < next.size(); ++b) next[a + b] += P[a] * Z[b];
      P = std::move(next);
    }
    Rational w = Rational(binomial(2 * k, k - 1)) * detail::tau_at(n, taus, k);
    if ((n - k) % 2) w = -w;
    acc += P[k + 1] * w;
  }
  return acc / Rational(2);
}

/// log|s| coefficient forced by the hierarchy: the monomial formal solution has
/// q = sum theta_i ... + a |s|^(-2-1/(2n)) with a fixed by the equation, and the
/// trace identity turns 2 theta_0 a into the log coefficient.
inline Rational ode_log_coefficient(unsigned n) {
  if (n < 1) throw DomainError("n must be >= 1");
  const std::vector<Rational> zero(n - 1, Rational(0));
  const HierarchyEq eq = build_hierarchy_eq(n, zero);
  const Rational e = -Rational(4 * n + 1) / Rational(2 * n);
  auto last = [&](const Rational& a) {
    AsymSeries q;
    q.n = n;
    q.push(Rational(1) / Rational(2 * n), AlgElem::beta_power(n, -1));
    q.push(e, AlgElem::beta_power(n, 1) * a);
    return series_residual(eq, q, 2 * n + 2).back().coefficient;
  };
  const AlgElem b = last(0), L = last(1) - b;
  const AlgElem a = -(b / L);  // correction is a * beta, so c = 2 theta_0 a beta = 2a
  if (!a.is_rational()) throw ConsistencyError("correction coefficient is not rational");
  return 2 * a[0];
}

inline Rational log_coefficient(unsigned n, Expansion conv = Expansion::Stated) {
  return conv == Expansion::Stated ? detail::stated_log_coefficient(n) : ode_log_coefficient(n);
}

/// Large-gap expansion of log F(s;1) without its undetermined constant.
inline AsymSeries largegap_series(unsigned n, const std::vector<Rational>& taus, Expansion conv = Expansion::Stated) {
  detail::check_taus(n, taus);
  AsymSeries out;
  out.n = n;
  const int N = static_cast<int>(n);
  for (int j = 0; j <= 2 * N; ++j) {
    if (j == N + 1) {
      if (conv == Expansion::Consistent) out.push(Rational(1), g1_kappa(n, taus) * Rational(-2));
      continue;
    }
    const Rational w = -Rational(N * N) / Rational((N + 1 - j) * (2 * N + 1 - j));
    out.push(Rational(2 * N - j + 1) / Rational(N), theta2(n, taus, static_cast<unsigned>(j)) * w);
  }
  out.log_coefficient = log_coefficient(n, conv);
  out.constant = FittedConstant{"logC", std::nullopt, std::nullopt, 0};
  return out;
}

/// q((-1)^(n+1) s) ~ sum_{i<=2n} theta_i |s|^(1/(2n) - i/n) + c/(2 theta_0) |s|^(-2-1/(2n)).
/// depth = 2n+1 includes the last correction (plus theta_(2n+1) in the consistent variant).
inline AsymSeries q_series(unsigned n, const std::vector<Rational>& taus, unsigned depth,
                           Expansion conv = Expansion::Stated) {
  detail::check_taus(n, taus);
  if (depth > 2 * n + 1) throw DomainError("q series is known through depth 2n+1");
  AsymSeries out;
  out.n = n;
  for (unsigned i = 0; i <= std::min(depth, 2 * n); ++i)
    out.push(Rational(1 - 2 * static_cast<int>(i)) / Rational(2 * n), theta(n, taus, i));
  if (depth == 2 * n + 1) {
    AlgElem a = AlgElem::beta_power(n, 1) * (log_coefficient(n, conv) / Rational(2));
    if (conv == Expansion::Consistent) a += theta(n, taus, 2 * n + 1);
    out.push(-Rational(4 * n + 1) / Rational(2 * n), a);
  }
  return out;
}

/// zeta'(-1) = 1/12 - log A (Glaisher), log A from Euler-Maclaurin on sum k log k.
inline double zeta_prime_minus_one() {
  const int N = 200;
  long double sum = 0;
  for (int k = 2; k <= N; ++k) sum += static_cast<long double>(k) * std::log(static_cast<long double>(k));
  const long double n = N, ln = std::log(n);
  const long double tail = (n * n / 2 + n / 2 + 1.0L / 12) * ln - n * n / 4 + 1.0L / (720 * n * n) -
                           1.0L / (5040 * n * n * n * n) + 1.0L / (10080 * n * n * n * n * n * n);
  const long double logA = sum - tail;
  return static_cast<double>(1.0L / 12 - logA);
}

/// log C for the Airy case: (1/24) log 2 + zeta'(-1).
inline double airy_log_constant() { return std::log(2.0) / 24.0 + zeta_prime_minus_one(); }

struct AsymptReport {
  unsigned n = 1;
  std::vector<double> s;         // profile points with s <= s_max
  std::vector<double> residual;  // log F - series (no constant)
  std::optional<double> fitted_logC;
  std::optional<double> stability;  // spread of residual over the window
  std::optional<double> known_logC;
  std::optional<double> known_deviation;  // max |residual - known log C|

  /// Mean residual over [a, b].
  double fit(double a, double b) const {
    double acc = 0.0;
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s[i] >= a - 1e-12 && s[i] <= b + 1e-12) {
        acc += residual[i];
        ++cnt;
      }
    if (!cnt) throw DomainError("fit window contains no profile points");
    return acc / static_cast<double>(cnt);
  }

  double spread(double a, double b) const {
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s[i] >= a - 1e-12 && s[i] <= b + 1e-12) {
        lo = std::min(lo, residual[i]);
        hi = std::max(hi, residual[i]);
      }
    if (lo > hi) throw DomainError("window contains no profile points");
    return hi - lo;
  }
};

/// Compares a computed profile with the large-gap expansion on s <= s_max.
inline AsymptReport asympt_vs_numeric(const std::vector<Rational>& taus, const GapProfile& pr, bool fit_constant,
                                      double s_max = -4.0, Expansion conv = Expansion::Stated) {
  const unsigned n = pr.n;
  detail::check_taus(n, taus);
  if (pr.rho != 1.0) throw DomainError("large-gap expansion holds for rho = 1");
  if (pr.s.empty() || pr.s.front() > -4.0) throw DomainError("profile must extend to s <= -4");
  const AsymSeries series = largegap_series(n, taus, conv);
  AsymptReport rep;
  rep.n = n;
  for (std::size_t i = 0; i < pr.s.size(); ++i) {
    if (pr.s[i] > s_max) continue;
    rep.s.push_back(pr.s[i]);
    rep.residual.push_back(pr.logF[i] - series.evaluate(-pr.s[i]));
  }
  if (rep.s.empty()) throw DomainError("no profile points at or below s_max");
  if (fit_constant) {
    rep.fitted_logC = rep.fit(rep.s.front(), rep.s.back());
    rep.stability = rep.spread(rep.s.front(), rep.s.back());
  }
  bool monomial = std::all_of(taus.begin(), taus.end(), [](const Rational& t) { return t == 0; });
  if (n == 1 && monomial) {
    rep.known_logC = airy_log_constant();
    double worst = 0.0;
    for (double r : rep.residual) worst = std::max(worst, std::abs(r - *rep.known_logC));
    rep.known_deviation = worst;
  }
  return rep;
}

}  // namespace piih
