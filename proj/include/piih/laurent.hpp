#pragma once

#include <climits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "piih/algelem.hpp"
#include "piih/error.hpp"
#include "piih/rational.hpp"

namespace piih {

/// Polynomial in z over Q(beta), coefficients in ascending degree.
using AlgPoly = std::vector<AlgElem>;

/// Large-z series sum_k c_k z^(k/ramification) over Q(beta).
///
/// Exponents are stored on the integer grid k; the actual power of z is
/// k / ramification. Every coefficient with k >= truncation is resolved
/// (absent keys are zero); nothing is known below it.
class LaurentSeries {
 public:
  static constexpr int kExact = INT_MIN / 4;

  LaurentSeries(unsigned n, std::string variable = "z", int ramification = 1)
      : n_(n), variable_(std::move(variable)), ram_(ramification) {
    if (ramification <= 0) throw DomainError("ramification must be positive");
  }

  unsigned n() const noexcept { return n_; }
  const std::string& variable() const noexcept { return variable_; }
  int ramification() const noexcept { return ram_; }
  int truncation() const noexcept { return trunc_; }
  bool exact() const noexcept { return trunc_ == kExact; }
  const std::map<int, AlgElem, std::greater<>>& terms() const noexcept { return terms_; }

  void set_truncation(int t) {
    trunc_ = t;
    for (auto it = terms_.begin(); it != terms_.end();) {
      if (it->first < t) it = terms_.erase(it);
      else ++it;
    }
  }

  /// Adds c * z^(k/ramification).
  void add_term(int k, const AlgElem& c) {
    if (c.n() != n_) throw DomainError("series coefficient from a different field");
    if (k < trunc_) return;
    auto [it, inserted] = terms_.try_emplace(k, c);
    if (!inserted) it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }

  /// Coefficient of z^e for a rational exponent e.
  AlgElem coefficient(const Rational& e) const {
    Rational scaled = e * ram_;
    if (!is_integer(scaled)) return AlgElem(n_);
    int k = static_cast<int>(numerator_of(scaled));
    if (k < trunc_)
      throw InsufficientOrderError("coefficient of " + variable_ + "^" + to_string(e) +
                                   " lies below the series truncation");
    auto it = terms_.find(k);
    return it == terms_.end() ? AlgElem(n_) : it->second;
  }

  std::optional<Rational> leading_exponent() const {
    if (terms_.empty()) return std::nullopt;
    return Rational(terms_.begin()->first, ram_);
  }

  /// Re-expresses the series on a finer grid (ramification multiplied by f).
  LaurentSeries refined(int f) const {
    LaurentSeries out(n_, variable_, ram_ * f);
    out.trunc_ = exact() ? kExact : trunc_ * f - (f - 1);
    for (const auto& [k, c] : terms_) out.terms_.emplace(k * f, c);
    return out;
  }

  friend LaurentSeries operator*(const LaurentSeries& a0, const LaurentSeries& b0) {
    if (a0.n_ != b0.n_) throw DomainError("series from different fields");
    int r = std::lcm(a0.ram_, b0.ram_);
    LaurentSeries a = a0.refined(r / a0.ram_), b = b0.refined(r / b0.ram_);
    LaurentSeries out(a.n_, a.variable_, r);
    int t = kExact;
    const bool a_zero = a.exact() && a.terms_.empty(), b_zero = b.exact() && b.terms_.empty();
    if (!a_zero && !b_zero) {
      // an inexact series with no known terms has its lead below the truncation
      int la = a.terms_.empty() ? a.trunc_ - 1 : a.terms_.begin()->first;
      int lb = b.terms_.empty() ? b.trunc_ - 1 : b.terms_.begin()->first;
      if (!a.exact()) t = std::max(t, a.trunc_ + lb);
      if (!b.exact()) t = std::max(t, b.trunc_ + la);
    }
    out.trunc_ = t;
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_) out.add_term(ka + kb, ca * cb);
    return out;
  }

 private:
  unsigned n_;
  std::string variable_;
  int ram_;
  int trunc_ = kExact;
  std::map<int, AlgElem, std::greater<>> terms_;
};

namespace detail {

/// a^r in Q(beta) for a = c*beta^m, c > 0.
inline AlgElem alg_rational_power(const AlgElem& a, const Rational& r) {
  auto t = a.single_term();
  if (!t) throw UnrepresentableFieldError("leading coefficient is not a single power of beta");
  auto [m, c] = *t;
  if (c <= 0) throw UnrepresentableFieldError("leading coefficient is not positive");
  const unsigned n = a.n();
  const int d = static_cast<int>(2 * n);
  const BigInt num_big = numerator_of(r), den_big = denominator_of(r);
  if (abs(num_big) > 4096 || den_big > 4096) throw DomainError("exponent too large");
  const int num = static_cast<int>(num_big), den = static_cast<int>(den_big);
  const Rational base(AlgElem::field_base(n));
  Rational cn = pow(c, num);
  // a^r = q * beta^T requires c^num = q^den * B^E with 2n*E = T*den - m*num.
  for (int T = 0; T < d; ++T) {
    long long lhs = static_cast<long long>(T) * den - static_cast<long long>(m) * num;
    if (lhs % d != 0) continue;
    int E = static_cast<int>(lhs / d);
    auto q = exact_root(cn / pow(base, E), static_cast<unsigned>(den));
    if (q) return AlgElem::beta_power(n, T) * *q;
  }
  throw UnrepresentableFieldError("(" + to_human(a) + ")^(" + to_string(r) +
                                  ") does not lie in Q(beta)");
}

/// Coefficients of (1 + sum_{i>=1} g[i] x^i)^r through x^K (J.C.P. Miller).
template <typename C>
std::vector<C> binomial_series(const std::vector<C>& g, const Rational& r, int K, const C& one) {
  std::vector<C> f;
  f.reserve(static_cast<std::size_t>(K) + 1);
  f.push_back(one);
  for (int k = 1; k <= K; ++k) {
    C acc = one * Rational(0);
    for (int i = 1; i <= k && i < static_cast<int>(g.size()); ++i) {
      Rational w = (r + 1) * i - k;
      if (w == 0) continue;
      acc += g[static_cast<std::size_t>(i)] * f[static_cast<std::size_t>(k - i)] * w;
    }
    f.push_back(acc * Rational(1, k));
  }
  return f;
}

}  // namespace detail

/// Large-z expansion of p(z)^r on the branch positive for large z > 0,
/// keeping every term down to z^order.
inline LaurentSeries frac_power_expand(AlgPoly p, const Rational& r, int order,
                                       const std::string& variable = "z") {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
  if (p.empty()) throw DomainError("cannot expand a power of the zero polynomial");
  const unsigned n = p.back().n();
  const int deg = static_cast<int>(p.size()) - 1;
  const AlgElem& lead = p.back();
  AlgElem lead_pow = detail::alg_rational_power(lead, r);

  const Rational dr = r * deg;
  const int b = static_cast<int>(denominator_of(dr));
  const int P = static_cast<int>(numerator_of(dr));
  // exponents P - k*b (ramified) must reach order*b
  long long Kll = (static_cast<long long>(P) - static_cast<long long>(order) * b);
  if (Kll > 4096LL * b) throw DomainError("truncation order too negative to be meaningful");
  const int K = Kll < 0 ? -1 : static_cast<int>(Kll / b);

  LaurentSeries out(n, variable, b);
  if (K < 0) {
    out.set_truncation(order * b);
    return out;
  }
  AlgElem inv_lead = lead.inverse();
  std::vector<AlgElem> g(static_cast<std::size_t>(std::min(K, deg)) + 1, AlgElem(n));
  bool rational = true;
  for (int i = 1; i < static_cast<int>(g.size()); ++i) {
    g[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(deg - i)] * inv_lead;
    rational = rational && g[static_cast<std::size_t>(i)].is_rational();
  }
  if (rational) {
    std::vector<Rational> gq(g.size());
    for (std::size_t i = 1; i < g.size(); ++i) gq[i] = g[i][0];
    auto f = detail::binomial_series<Rational>(gq, r, K, Rational(1));
    for (int k = 0; k <= K; ++k)
      if (f[static_cast<std::size_t>(k)] != 0)
        out.add_term(P - k * b, lead_pow * f[static_cast<std::size_t>(k)]);
  } else {
    auto f = detail::binomial_series<AlgElem>(g, r, K, AlgElem(n, Rational(1)));
    for (int k = 0; k <= K; ++k) out.add_term(P - k * b, lead_pow * f[static_cast<std::size_t>(k)]);
  }
  out.set_truncation(P - (K + 1) * b + 1);
  return out;
}

/// Minus the coefficient of z^-1.
inline AlgElem residue_at_infinity(const LaurentSeries& s) {
  if (!s.exact() && s.truncation() > -s.ramification())
    throw InsufficientOrderError("series does not resolve the z^-1 term");
  return -s.coefficient(Rational(-1));
}

/// Polynomial with rational coefficients lifted into Q(beta).
inline AlgPoly lift(unsigned n, const std::vector<Rational>& coeffs) {
  AlgPoly p;
  p.reserve(coeffs.size());
  for (const auto& c : coeffs) p.emplace_back(n, c);
  return p;
}

}  // namespace piih
