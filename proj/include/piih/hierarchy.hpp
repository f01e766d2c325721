#pragma once

#include <cmath>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "piih/algelem.hpp"
#include "piih/asymseries.hpp"
#include "piih/diffpoly.hpp"
#include "piih/error.hpp"
#include "piih/finite_diff.hpp"
#include "piih/rational.hpp"

namespace piih {

inline constexpr unsigned kDefaultMaxLenard = 6;

/// Lenard density L_j[f] with every integration constant set to zero:
/// d/ds L_{j+1} = (D^3 + 4 f D + 2 f') L_j,  L_0 = 1/2.
inline DiffPoly lenard(unsigned j, unsigned max_j = kDefaultMaxLenard) {
  if (j > max_j) throw DomainError("Lenard index " + std::to_string(j) + " exceeds the configured maximum " +
                                   std::to_string(max_j));
  const DiffPoly f = DiffPoly::derivative_symbol("f", 0);
  const DiffPoly fs = DiffPoly::derivative_symbol("f", 1);
  DiffPoly L = DiffPoly::constant("f", Rational(1, 2));
  for (unsigned i = 0; i < j; ++i) {
    DiffPoly rhs = total_derivative(L, 3) + Rational(4) * f * total_derivative(L) + Rational(2) * fs * L;
    L = integrate_diffpoly(rhs);
  }
  return L;
}

/// E(q) = (D + 2q) L_n[q' - q^2] + sum_l tau_l (D + 2q) L_l[q' - q^2] - s q + alpha.
struct HierarchyEq {
  unsigned n = 1;
  std::vector<Rational> taus;      // tau_1 .. tau_{n-1}
  Rational alpha = 0;
  std::vector<DiffPoly> members;   // members[l-1] = (D + 2q) L_l[q' - q^2], l = 1..n
  DiffPoly lhs_minus_rhs{"q"};
};

inline HierarchyEq build_hierarchy_eq(unsigned n, const std::vector<Rational>& taus, const Rational& alpha = 0,
                                      unsigned max_j = kDefaultMaxLenard) {
  if (n < 1) throw DomainError("hierarchy index n must be >= 1");
  if (taus.size() != n - 1) throw DomainError("expected " + std::to_string(n - 1) + " deformation parameters");
  const DiffPoly q = DiffPoly::derivative_symbol("q", 0);
  const DiffPoly f_of_q = DiffPoly::derivative_symbol("q", 1) - q * q;
  HierarchyEq eq;
  eq.n = n;
  eq.taus = taus;
  eq.alpha = alpha;
  for (unsigned l = 1; l <= n; ++l) {
    DiffPoly L = substitute(lenard(l, max_j), f_of_q);
    eq.members.push_back(total_derivative(L) + Rational(2) * q * L);
  }
  DiffPoly E = eq.members[n - 1];
  for (unsigned l = 1; l < n; ++l) E += taus[l - 1] * eq.members[l - 1];
  DiffMonomial sq{1, {1}};
  E.add(sq, -1);
  E.add(DiffMonomial{}, alpha);
  eq.lhs_minus_rhs = E;
  return eq;
}

struct RenderOptions {
  bool symbolic_taus = false;   // print tau1, tau2, ... instead of values
  bool symbolic_alpha = false;  // print "alpha" instead of its value
};

/// "q'''' - 10*q*q'^2 - 10*q^2*q'' + 6*q^5 + 1*(q'' - 2*q^3) - s*q + alpha = 0"
inline std::string render_text(const HierarchyEq& eq, RenderOptions opt = {}) {
  std::string out = to_text(eq.members[eq.n - 1]);
  for (unsigned l = eq.n - 1; l >= 1; --l) {
    const Rational& t = eq.taus[l - 1];
    std::string group = "(" + to_text(eq.members[l - 1]) + ")";
    if (opt.symbolic_taus) out += " + tau" + std::to_string(l) + "*" + group;
    else if (t < 0) out += " - " + to_string(Rational(-t)) + "*" + group;
    else out += " + " + to_string(t) + "*" + group;
  }
  out += " - s*q";
  if (opt.symbolic_alpha) out += " + alpha";
  else if (eq.alpha > 0) out += " + " + to_string(eq.alpha);
  else if (eq.alpha < 0) out += " - " + to_string(Rational(-eq.alpha));
  return out + " = 0";
}

inline std::string render_latex(const HierarchyEq& eq, RenderOptions opt = {}) {
  std::string out = to_latex(eq.members[eq.n - 1]);
  for (unsigned l = eq.n - 1; l >= 1; --l) {
    const Rational& t = eq.taus[l - 1];
    std::string group = "\\left(" + to_latex(eq.members[l - 1]) + "\\right)";
    if (opt.symbolic_taus) out += " + \\tau_{" + std::to_string(l) + "}" + group;
    else if (t < 0) out += " - " + to_string(Rational(-t)) + group;
    else out += " + " + to_string(t) + group;
  }
  out += " - sq";
  if (opt.symbolic_alpha) out += " + \\alpha";
  else if (eq.alpha != 0) out += (eq.alpha > 0 ? " + " : " - ") + to_string(eq.alpha > 0 ? eq.alpha : Rational(-eq.alpha));
  return out + " = 0";
}

/// Residual E(q)(s_i) at interior grid points, derivatives by centered finite
/// differences of the given accuracy order.
struct ResidualProfile {
  std::vector<double> s;
  std::vector<double> residual;
  double max_abs() const {
    double m = 0.0;
    for (double r : residual) m = std::max(m, std::abs(r));
    return m;
  }
};

inline ResidualProfile eval_residual(const HierarchyEq& eq, double s0, double h, std::span<const double> samples,
                                     unsigned accuracy = 6) {
  const unsigned kmax = std::max(eq.lhs_minus_rhs.max_order(), 0);
  std::size_t hw = 0;
  for (unsigned k = 0; k <= kmax; ++k) hw = std::max(hw, fd::centered_half_width(k, accuracy));
  if (samples.size() < 2 * hw + 1) throw DomainError("grid too small for the derivative stencil");
  std::vector<std::vector<double>> d(kmax + 1);
  d[0].assign(samples.begin(), samples.end());
  for (unsigned k = 1; k <= kmax; ++k) d[k] = fd::centered_derivative(samples, h, k, accuracy);
  const double alpha = to_double(eq.alpha);
  std::vector<std::pair<DiffMonomial, double>> monos;
  for (const auto& [m, c] : eq.lhs_minus_rhs.terms())
    if (!(m.s_power == 0 && m.exps.empty())) monos.emplace_back(m, to_double(c));
  ResidualProfile out;
  for (std::size_t i = hw; i + hw < samples.size(); ++i) {
    const double s = s0 + h * static_cast<double>(i);
    double acc = alpha;
    for (const auto& [m, c] : monos) {
      double term = c * std::pow(s, static_cast<int>(m.s_power));
      for (std::size_t k = 0; k < m.exps.size(); ++k)
        if (m.exps[k]) term *= std::pow(d[k][i], static_cast<int>(m.exps[k]));
      acc += term;
    }
    out.s.push_back(s);
    out.residual.push_back(acc);
  }
  return out;
}

struct SeriesResidualTerm {
  Rational exponent;  // power of |s|
  AlgElem coefficient;
};

namespace detail {

using WSeries = std::map<int, AlgElem, std::greater<>>;

inline void w_add(WSeries& s, int k, const AlgElem& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = s.try_emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) s.erase(it);
  }
}

inline WSeries w_mul(const WSeries& a, const WSeries& b, int floor) {
  WSeries out;
  for (const auto& [ka, ca] : a)
    for (const auto& [kb, cb] : b) {
      if (ka + kb < floor) continue;
      w_add(out, ka + kb, ca * cb);
    }
  return out;
}

inline int w_top(const WSeries& s) { return s.empty() ? INT_MIN / 4 : s.begin()->first; }

}  // namespace detail

/// Substitutes an expansion of q((-1)^(n+1) s) in powers of |s| (s -> -inf)
/// into E(q) and returns the coefficients of the top check_depth powers.
///
/// With t = |s| and y the hierarchy variable, y = (-1)^n t and
/// d/dy = (-1)^n d/dt. Exponents are carried on the grid w = t^(1/(2n)), where
/// every term of an admissible expansion has an odd power of w.
inline std::vector<SeriesResidualTerm> series_residual(const HierarchyEq& eq, const AsymSeries& series,
                                                       unsigned check_depth) {
  if (eq.alpha != 0) throw DomainError("series residual requires alpha = 0");
  const unsigned n = eq.n;
  const int two_n = static_cast<int>(2 * n);
  if (series.terms.empty()) throw DomainError("empty series");
  const unsigned field = series.n;
  detail::WSeries q;
  for (const auto& [e, c] : series.terms) {
    Rational k = e * two_n;
    if (!is_integer(k) || (static_cast<long>(numerator_of(k)) % 2) == 0)
      throw DomainError("series exponent " + to_string(e) + " is off the grid (odd)/(2n)");
    detail::w_add(q, static_cast<int>(numerator_of(k)), c);
  }
  const Rational sigma = (n % 2 == 0) ? Rational(1) : Rational(-1);
  const int kmax = std::max(eq.lhs_minus_rhs.max_order(), 0);
  std::vector<detail::WSeries> derivs{q};
  for (int k = 1; k <= kmax; ++k) {
    detail::WSeries d;
    for (const auto& [p, c] : derivs.back())
      if (p != 0) detail::w_add(d, p - two_n, c * (sigma * Rational(p, two_n)));
    derivs.push_back(std::move(d));
  }
  const int top = two_n + detail::w_top(q);
  const int floor = top - 2 * (static_cast<int>(check_depth) - 1);
  detail::WSeries total;
  for (const auto& [m, c] : eq.lhs_minus_rhs.terms()) {
    // factor list: s^a then derivative factors
    std::vector<const detail::WSeries*> factors;
    for (std::size_t k = 0; k < m.exps.size(); ++k)
      for (unsigned e = 0; e < m.exps[k]; ++e) factors.push_back(&derivs[k]);
    const int s_shift = two_n * static_cast<int>(m.s_power);
    Rational coeff = c * pow(sigma, static_cast<int>(m.s_power));
    std::vector<int> tail_top(factors.size() + 1, 0);
    for (std::size_t i = factors.size(); i-- > 0;) tail_top[i] = tail_top[i + 1] + detail::w_top(*factors[i]);
    detail::WSeries prod;
    prod.emplace(s_shift, AlgElem(field, coeff));
    for (std::size_t i = 0; i < factors.size(); ++i) prod = detail::w_mul(prod, *factors[i], floor - tail_top[i + 1]);
    for (const auto& [p, v] : prod)
      if (p >= floor) detail::w_add(total, p, v);
  }
  std::vector<SeriesResidualTerm> out;
  for (unsigned i = 0; i < check_depth; ++i) {
    int p = top - 2 * static_cast<int>(i);
    auto it = total.find(p);
    out.push_back({Rational(p, two_n), it == total.end() ? AlgElem(field) : it->second});
  }
  return out;
}

}  // namespace piih
