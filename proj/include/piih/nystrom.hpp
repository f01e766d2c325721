#pragma once

#include <cmath>
#include <vector>

#include "piih/error.hpp"
#include "piih/quadrature.hpp"

namespace piih {

enum class HalfLineMap { Rational, Truncated };

/// Quadrature nodes x_i on (s, inf) with weights already including the Jacobian.
struct HalfLineNodes {
  std::vector<double> x;
  std::vector<double> w;
};

/// Rational map x = s + L(1+t)/(1-t) of Gauss-Legendre nodes, or plain
/// Gauss-Legendre on [s, s + T] for the truncated variant.
inline HalfLineNodes half_line_nodes(double s, unsigned m, HalfLineMap map = HalfLineMap::Rational, double L = 2.0,
                                     double T = 0.0) {
  if (m < 1) throw DomainError("need at least one node");
  const auto& r = quad::gauss_legendre(m);
  HalfLineNodes out;
  out.x.resize(m);
  out.w.resize(m);
  for (unsigned i = 0; i < m; ++i) {
    const double t = r.nodes[i];
    if (map == HalfLineMap::Rational) {
      out.x[i] = s + L * (1.0 + t) / (1.0 - t);
      out.w[i] = r.weights[i] * 2.0 * L / ((1.0 - t) * (1.0 - t));
    } else {
      if (!(T > 0.0)) throw DomainError("truncated map needs a positive length");
      out.x[i] = s + 0.5 * T * (1.0 + t);
      out.w[i] = 0.5 * T * r.weights[i];
    }
  }
  return out;
}

}  // namespace piih
