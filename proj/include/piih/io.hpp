#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "piih/algelem.hpp"
#include "piih/asymseries.hpp"
#include "piih/error.hpp"
#include "piih/hierarchy.hpp"
#include "piih/rational.hpp"

namespace piih::io {

using nlohmann::json;

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Header row plus one row per record, every float at 17 significant digits.
inline void write_csv(std::ostream& os, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << "\r\n";
  for (const auto& r : rows) {
    if (r.size() != header.size()) throw DomainError("CSV row width does not match the header");
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << fmt17(r[i]);
    os << "\r\n";
  }
}

inline json to_json(const AlgElem& x) {
  json coeffs = json::array();
  for (const auto& c : x.coeffs()) coeffs.push_back(to_string(c));
  return {{"n", x.n()}, {"coeffs", coeffs}};
}

inline AlgElem alg_from_json(const json& j) {
  const unsigned n = j.at("n").get<unsigned>();
  std::vector<Rational> c;
  for (const auto& v : j.at("coeffs")) c.push_back(parse_rational(v.get<std::string>()));
  return AlgElem(n, std::move(c));
}

inline json to_json(const AsymSeries& s, bool with_float = false) {
  json terms = json::array();
  for (const auto& [e, c] : s.terms) {
    json t{{"exponent", to_string(e)}, {"coefficient", to_json(c)}, {"human", to_human(c)}};
    if (with_float) t["value"] = alg_to_float(c);
    terms.push_back(t);
  }
  json out{{"variable", s.variable}, {"terms", terms}};
  if (s.log_coefficient) out["log_coefficient"] = to_string(*s.log_coefficient);
  if (s.constant) {
    json c{{"name", s.constant->name}, {"fitted", true}, {"exponent", to_string(s.constant->exponent)}};
    if (s.constant->value) c["value"] = *s.constant->value;
    if (s.constant->stability) c["stability"] = *s.constant->stability;
    out["constant"] = c;
  }
  return out;
}

/// Monomial list: coefficient, power of s, exponents of q, q', q'', ...
inline json to_json(const DiffPoly& p) {
  json out = json::array();
  for (const auto& [m, c] : p.terms()) out.push_back({{"coeff", to_string(c)}, {"s_power", m.s_power}, {"exps", m.exps}});
  return out;
}

inline json to_json(const HierarchyEq& eq) {
  json taus = json::array();
  for (const auto& t : eq.taus) taus.push_back(to_string(t));
  json members = json::array();
  for (const auto& m : eq.members) members.push_back(to_json(m));
  return {{"n", eq.n},
          {"taus", taus},
          {"alpha", to_string(eq.alpha)},
          {"variable", eq.lhs_minus_rhs.var()},
          {"members", members},
          {"lhs_minus_rhs", to_json(eq.lhs_minus_rhs)}};
}

/// "a:b:step" -> a, a+step, ..., up to b.
inline std::vector<double> parse_range(const std::string& text) {
  const auto p1 = text.find(':');
  const auto p2 = p1 == std::string::npos ? std::string::npos : text.find(':', p1 + 1);
  if (p2 == std::string::npos) throw UsageError("range must look like a:b:step, got '" + text + "'");
  double a, b, h;
  try {
    std::size_t used = 0;
    a = std::stod(text.substr(0, p1), &used);
    if (used != p1) throw std::invalid_argument("a");
    b = std::stod(text.substr(p1 + 1, p2 - p1 - 1), &used);
    if (used != p2 - p1 - 1) throw std::invalid_argument("b");
    h = std::stod(text.substr(p2 + 1), &used);
    if (used != text.size() - p2 - 1) throw std::invalid_argument("step");
  } catch (const std::logic_error&) {
    throw UsageError("range must look like a:b:step, got '" + text + "'");
  }
  if (!(h > 0.0)) throw UsageError("range step must be positive");
  if (b < a) throw UsageError("range is empty");
  std::vector<double> out;
  const auto count = static_cast<std::size_t>((b - a) / h + 1e-9) + 1;
  for (std::size_t i = 0; i < count; ++i) out.push_back(a + h * static_cast<double>(i));
  return out;
}

}  // namespace piih::io
