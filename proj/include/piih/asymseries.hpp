#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "piih/algelem.hpp"
#include "piih/error.hpp"
#include "piih/rational.hpp"

namespace piih {

/// A constant that the theory leaves undetermined (kappa, log C). It is only
/// ever filled in by a numerical fit and is never reported as derived.
struct FittedConstant {
  std::string name;
  std::optional<double> value;
  std::optional<double> stability;  // spread of the fit across windows
  Rational exponent = 0;             // multiplies |s|^exponent (kappa sits at -1/(2n))
};

/// Finite expansion sum_i c_i |s|^(e_i) [+ c_log * log|s|] [+ fitted constant]
/// in the regime s -> -infinity.
struct AsymSeries {
  unsigned n = 1;                    // field parameter of the coefficients
  std::string variable = "|s|";
  std::vector<std::pair<Rational, AlgElem>> terms;  // strictly decreasing exponents, nonzero
  std::optional<Rational> log_coefficient;
  std::optional<FittedConstant> constant;

  /// Appends a term; zero coefficients are dropped and order is enforced.
  void push(const Rational& exponent, const AlgElem& coeff) {
    if (coeff.is_zero()) return;
    if (!terms.empty() && !(exponent < terms.back().first))
      throw DomainError("series exponents must be strictly decreasing");
    terms.emplace_back(exponent, coeff);
  }

  AlgElem coefficient(const Rational& exponent) const {
    for (const auto& [e, c] : terms)
      if (e == exponent) return c;
    return AlgElem(n);
  }

  /// Value at |s| = t > 0, without the fitted constant.
  double evaluate(double t) const {
    if (!(t > 0)) throw DomainError("asymptotic series evaluated at non-positive |s|");
    double acc = 0.0;
    for (const auto& [e, c] : terms) acc += alg_to_float(c) * std::pow(t, to_double(e));
    if (log_coefficient) acc += to_double(*log_coefficient) * std::log(t);
    return acc;
  }
};

inline std::string exponent_text(const Rational& e) {
  if (is_integer(e)) return to_string(e);
  return "(" + to_string(e) + ")";
}

/// "-(1/12)*|s|^3 - (1/8)*log|s| + logC[fitted]"
inline std::string to_human(const AsymSeries& s, bool with_float = false) {
  std::string out;
  auto append = [&](const std::string& coeff_text, double coeff_value, const std::string& tail) {
    std::string body = coeff_text;
    bool negative = !body.empty() && body[0] == '-';
    if (negative) body.erase(0, 1);
    if (out.empty()) out += negative ? "-" : "";
    else out += negative ? " - " : " + ";
    out += body;
    if (with_float) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "[%.17g]", coeff_value);
      out += buf;
    }
    out += tail;
  };
  for (const auto& [e, c] : s.terms) {
    std::string tail = e == 0 ? "" : e == 1 ? "*" + s.variable : "*" + s.variable + "^" + exponent_text(e);
    append(to_human(c), alg_to_float(c), tail);
  }
  if (s.log_coefficient && *s.log_coefficient != 0) {
    const Rational& c = *s.log_coefficient;
    std::string txt = (c < 0 ? "-(" : "(") + to_string(c < 0 ? Rational(-c) : c) + ")";
    append(txt, to_double(c), "*log" + s.variable);
  }
  if (s.constant) {
    std::string txt = s.constant->name + "[fitted]";
    if (s.constant->exponent != 0) txt += "*" + s.variable + "^" + exponent_text(s.constant->exponent);
    if (s.constant->value) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "=%.17g", *s.constant->value);
      txt += buf;
    }
    if (out.empty()) out = txt;
    else out += " + " + txt;
  }
  if (out.empty()) out = "0";
  return out;
}

}  // namespace piih
