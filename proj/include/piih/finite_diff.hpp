#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "piih/error.hpp"

namespace piih::fd {

/// Fornberg's recursion: weights[d][j] approximates the d-th derivative at x0
/// from values at nodes[j], for d = 0..max_deriv.
inline std::vector<std::vector<double>> fornberg_weights(double x0, std::span<const double> nodes,
                                                         unsigned max_deriv) {
  const std::size_t n = nodes.size();
  std::vector<std::vector<double>> c(max_deriv + 1, std::vector<double>(n, 0.0));
  if (n == 0) return c;
  double c1 = 1.0, c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t mn = std::min<std::size_t>(i, max_deriv);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t k = mn; k >= 1; --k)
          c[k][i] = c1 * (static_cast<double>(k) * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (std::size_t k = mn; k >= 1; --k)
        c[k][j] = (c4 * c[k][j] - static_cast<double>(k) * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

/// Half-width of the centered stencil for the given derivative order and
/// (even) accuracy order.
inline std::size_t centered_half_width(unsigned deriv, unsigned accuracy) {
  if (accuracy == 0 || accuracy % 2) throw DomainError("finite-difference accuracy order must be even");
  return (deriv + 1) / 2 + accuracy / 2 - 1;
}

/// Centered weights (unit spacing) for the deriv-th derivative; divide by h^deriv.
inline std::vector<double> centered_weights(unsigned deriv, unsigned accuracy) {
  const std::size_t hw = centered_half_width(deriv, accuracy);
  std::vector<double> nodes;
  for (long j = -static_cast<long>(hw); j <= static_cast<long>(hw); ++j) nodes.push_back(static_cast<double>(j));
  return fornberg_weights(0.0, nodes, deriv)[deriv];
}

/// Derivative of uniformly sampled data at every index whose centered stencil
/// fits; entries outside [hw, n-1-hw] are left at zero.
inline std::vector<double> centered_derivative(std::span<const double> values, double h, unsigned deriv,
                                               unsigned accuracy) {
  const auto w = centered_weights(deriv, accuracy);
  const std::size_t hw = w.size() / 2;
  std::vector<double> out(values.size(), 0.0);
  if (values.size() < w.size()) throw DomainError("grid too small for the finite-difference stencil");
  double scale = 1.0;
  for (unsigned d = 0; d < deriv; ++d) scale *= h;
  for (std::size_t i = hw; i + hw < values.size(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) acc += w[j] * values[i - hw + j];
    out[i] = acc / scale;
  }
  return out;
}

}  // namespace piih::fd
