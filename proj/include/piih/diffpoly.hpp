#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "piih/error.hpp"
#include "piih/rational.hpp"

namespace piih {

/// s^s_power * prod_k (v^(k))^exps[k]; exps carries no trailing zeros.
struct DiffMonomial {
  unsigned s_power = 0;
  std::vector<unsigned> exps;

  unsigned degree() const {
    unsigned d = 0;
    for (auto e : exps) d += e;
    return d;
  }
  /// Highest derivative order present, or -1 for a pure power of s.
  int max_order() const { return static_cast<int>(exps.size()) - 1; }
  unsigned exponent(std::size_t k) const { return k < exps.size() ? exps[k] : 0u; }

  void trim() {
    while (!exps.empty() && exps.back() == 0) exps.pop_back();
  }

  friend bool operator==(const DiffMonomial&, const DiffMonomial&) = default;
};

/// Canonical order: s-power, then total degree, then the exponent vector
/// lexicographically (lowest derivative order first).
struct MonomialOrder {
  bool operator()(const DiffMonomial& a, const DiffMonomial& b) const {
    if (a.s_power != b.s_power) return a.s_power < b.s_power;
    unsigned da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    std::size_t len = std::max(a.exps.size(), b.exps.size());
    for (std::size_t k = 0; k < len; ++k) {
      unsigned ea = a.exponent(k), eb = b.exponent(k);
      if (ea != eb) return ea < eb;
    }
    return false;
  }
};

/// Differential polynomial in one dependent variable with coefficients in Q[s].
class DiffPoly {
 public:
  using Terms = std::map<DiffMonomial, Rational, MonomialOrder>;

  explicit DiffPoly(std::string var = "q") : var_(std::move(var)) {}

  static DiffPoly constant(const std::string& var, const Rational& c) {
    DiffPoly p(var);
    p.add(DiffMonomial{}, c);
    return p;
  }
  /// The k-th derivative of the dependent variable.
  static DiffPoly derivative_symbol(const std::string& var, unsigned k, const Rational& c = 1) {
    DiffPoly p(var);
    DiffMonomial m;
    m.exps.assign(k + 1, 0);
    m.exps[k] = 1;
    p.add(m, c);
    return p;
  }
  static DiffPoly s_power(const std::string& var, unsigned a, const Rational& c = 1) {
    DiffPoly p(var);
    p.add(DiffMonomial{a, {}}, c);
    return p;
  }

  const std::string& var() const noexcept { return var_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  int max_order() const {
    int k = -1;
    for (const auto& [m, c] : terms_) k = std::max(k, m.max_order());
    return k;
  }

  Rational coefficient(const DiffMonomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  void add(DiffMonomial m, const Rational& c) {
    if (c == 0) return;
    m.trim();
    auto [it, inserted] = terms_.try_emplace(std::move(m), c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  DiffPoly& operator+=(const DiffPoly& o) {
    check_var(o);
    for (const auto& [m, c] : o.terms_) add(m, c);
    return *this;
  }
  DiffPoly& operator-=(const DiffPoly& o) {
    check_var(o);
    for (const auto& [m, c] : o.terms_) add(m, -c);
    return *this;
  }
  DiffPoly& operator*=(const Rational& q) {
    if (q == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= q;
    return *this;
  }

  friend DiffPoly operator+(DiffPoly a, const DiffPoly& b) { return a += b; }
  friend DiffPoly operator-(DiffPoly a, const DiffPoly& b) { return a -= b; }
  friend DiffPoly operator-(DiffPoly a) { return a *= Rational(-1); }
  friend DiffPoly operator*(DiffPoly a, const Rational& q) { return a *= q; }
  friend DiffPoly operator*(const Rational& q, DiffPoly a) { return a *= q; }

  friend DiffPoly operator*(const DiffPoly& a, const DiffPoly& b) {
    a.check_var(b);
    DiffPoly out(a.var_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) out.add(multiply(ma, mb), ca * cb);
    return out;
  }

  DiffPoly pow(unsigned e) const {
    DiffPoly out = constant(var_, 1), base = *this;
    while (e) {
      if (e & 1u) out = out * base;
      e >>= 1;
      if (e) base = base * base;
    }
    return out;
  }

  friend bool operator==(const DiffPoly& a, const DiffPoly& b) {
    return a.var_ == b.var_ && a.terms_ == b.terms_;
  }

  static DiffMonomial multiply(const DiffMonomial& a, const DiffMonomial& b) {
    DiffMonomial m;
    m.s_power = a.s_power + b.s_power;
    m.exps.assign(std::max(a.exps.size(), b.exps.size()), 0);
    for (std::size_t k = 0; k < m.exps.size(); ++k) m.exps[k] = a.exponent(k) + b.exponent(k);
    return m;
  }

  /// Returns a copy with the dependent variable renamed.
  DiffPoly renamed(const std::string& var) const {
    DiffPoly p = *this;
    p.var_ = var;
    return p;
  }

 private:
  void check_var(const DiffPoly& o) const {
    if (o.var_ != var_ && !o.terms_.empty() && !terms_.empty())
      throw DomainError("differential polynomials in different variables: " + var_ + ", " + o.var_);
  }

  std::string var_;
  Terms terms_;
};

/// d/ds by the Leibniz rule: v^(k) -> v^(k+1), s^a -> a*s^(a-1).
inline DiffPoly total_derivative(const DiffPoly& p) {
  DiffPoly out(p.var());
  for (const auto& [m, c] : p.terms()) {
    if (m.s_power > 0) {
      DiffMonomial d = m;
      d.s_power -= 1;
      out.add(d, c * m.s_power);
    }
    for (std::size_t k = 0; k < m.exps.size(); ++k) {
      if (m.exps[k] == 0) continue;
      DiffMonomial d = m;
      d.exps[k] -= 1;
      if (d.exps.size() < k + 2) d.exps.resize(k + 2, 0);
      d.exps[k + 1] += 1;
      out.add(d, c * m.exps[k]);
    }
  }
  return out;
}

inline DiffPoly total_derivative(const DiffPoly& p, unsigned times) {
  DiffPoly out = p;
  for (unsigned i = 0; i < times; ++i) out = total_derivative(out);
  return out;
}

/// Formal antiderivative with zero constant term.
///
/// Repeatedly takes a monomial containing the highest derivative order k
/// (which must appear linearly), integrates it against v^(k-1), subtracts the
/// derivative of that candidate and continues; at order zero only pure powers
/// of s are integrable.
inline DiffPoly integrate_diffpoly(const DiffPoly& p) {
  DiffPoly rest = p, result(p.var());
  std::size_t guard = 0;
  while (!rest.is_zero()) {
    if (++guard > 100000) throw IntegrationError("formal integration did not terminate");
    const int k = rest.max_order();
    if (k <= 0) {
      // pure s-polynomial part integrates directly; anything with v itself does not
      for (const auto& [m, c] : rest.terms()) {
        if (m.max_order() >= 0)
          throw IntegrationError("remainder is not a total derivative");
        result.add(DiffMonomial{m.s_power + 1, {}}, c / (m.s_power + 1));
      }
      break;
    }
    // pick a monomial of maximal order
    auto it = std::find_if(rest.terms().begin(), rest.terms().end(),
                           [k](const auto& t) { return t.first.max_order() == k; });
    const DiffMonomial m = it->first;
    const Rational c = it->second;
    if (m.exps[static_cast<std::size_t>(k)] != 1)
      throw IntegrationError("highest derivative appears nonlinearly; not a total derivative");
    DiffMonomial cand = m;
    cand.exps[static_cast<std::size_t>(k)] = 0;
    unsigned e = cand.exponent(static_cast<std::size_t>(k - 1));
    cand.exps[static_cast<std::size_t>(k - 1)] = e + 1;
    cand.trim();
    DiffPoly piece(p.var());
    piece.add(cand, c / (e + 1));
    result += piece;
    rest -= total_derivative(piece);
  }
  return result;
}

/// Replaces every f^(k) in p by the k-th total derivative of expr.
inline DiffPoly substitute(const DiffPoly& p, const DiffPoly& expr) {
  const int order = std::max(p.max_order(), 0);
  std::vector<DiffPoly> derivs{expr};
  for (int k = 1; k <= order; ++k) derivs.push_back(total_derivative(derivs.back()));
  DiffPoly out(expr.var());
  for (const auto& [m, c] : p.terms()) {
    DiffPoly term = DiffPoly::s_power(expr.var(), m.s_power, c);
    for (std::size_t k = 0; k < m.exps.size(); ++k)
      if (m.exps[k]) term = term * derivs[k].pow(m.exps[k]);
    out += term;
  }
  return out;
}

namespace detail {

inline std::string symbol_text(const std::string& var, std::size_t k) {
  return var + std::string(k, '\'');
}
inline std::string symbol_latex(const std::string& var, std::size_t k) {
  if (k <= 3) return var + std::string(k, '\'');
  return var + "^{(" + std::to_string(k) + ")}";
}

}  // namespace detail

/// Plain-text rendering: "q'''' - 10*q*q'^2 - 10*q^2*q'' + 6*q^5".
inline std::string to_text(const DiffPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    Rational a = c < 0 ? Rational(-c) : c;
    if (first) out += c < 0 ? "-" : "";
    else out += c < 0 ? " - " : " + ";
    first = false;
    std::vector<std::string> parts;
    if (m.s_power == 1) parts.push_back("s");
    else if (m.s_power > 1) parts.push_back("s^" + std::to_string(m.s_power));
    for (std::size_t k = 0; k < m.exps.size(); ++k) {
      if (!m.exps[k]) continue;
      std::string sym = detail::symbol_text(p.var(), k);
      parts.push_back(m.exps[k] == 1 ? sym : sym + "^" + std::to_string(m.exps[k]));
    }
    std::string body;
    for (std::size_t i = 0; i < parts.size(); ++i) body += (i ? "*" : "") + parts[i];
    if (body.empty()) out += to_string(a);
    else if (a == 1) out += body;
    else out += to_string(a) + "*" + body;
  }
  return out;
}

inline std::string to_latex(const DiffPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    Rational a = c < 0 ? Rational(-c) : c;
    if (first) out += c < 0 ? "-" : "";
    else out += c < 0 ? " - " : " + ";
    first = false;
    std::string body;
    if (m.s_power == 1) body += "s";
    else if (m.s_power > 1) body += "s^{" + std::to_string(m.s_power) + "}";
    for (std::size_t k = 0; k < m.exps.size(); ++k) {
      if (!m.exps[k]) continue;
      std::string sym = detail::symbol_latex(p.var(), k);
      if (m.exps[k] == 1) body += sym;
      else if (k == 0) body += sym + "^{" + std::to_string(m.exps[k]) + "}";
      else body += "(" + sym + ")^{" + std::to_string(m.exps[k]) + "}";
    }
    std::string coef;
    if (!is_integer(a)) coef = "\\frac{" + numerator_of(a).str() + "}{" + denominator_of(a).str() + "}";
    else if (a != 1 || body.empty()) coef = numerator_of(a).str();
    out += coef + body;
  }
  return out;
}

}  // namespace piih
