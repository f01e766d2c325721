#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

#include "piih/error.hpp"

namespace piih::quad {

struct Rule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// Gauss-Legendre nodes by Newton iteration on P_m, cached per m.
inline const Rule& gauss_legendre(unsigned m) {
  static std::map<unsigned, Rule> cache;
  static std::mutex mu;
  std::lock_guard lock(mu);
  if (m == 0) throw DomainError("Gauss-Legendre rule needs at least one node");
  if (auto it = cache.find(m); it != cache.end()) return it->second;
  Rule r;
  r.nodes.resize(m);
  r.weights.resize(m);
  for (unsigned i = 0; i < (m + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (unsigned k = 2; k <= m; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (m == 1) p0 = 1.0;
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (unsigned k = 2; k <= m; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (m == 1) p0 = 1.0;
    dp = m * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[m - 1 - i] = x;
    r.weights[i] = w;
    r.weights[m - 1 - i] = w;
  }
  return cache.emplace(m, std::move(r)).first->second;
}

/// Tanh-sinh rule with about m nodes on [-1, 1].
inline Rule tanh_sinh(unsigned m) {
  if (m < 3) throw DomainError("tanh-sinh rule needs at least three nodes");
  const int K = static_cast<int>(m / 2);
  const double tmax = 3.0;  // keeps 1 - |x| resolvable in double
  const double h = tmax / K;
  Rule r;
  for (int k = -K; k <= K; ++k) {
    const double t = k * h;
    const double u = std::numbers::pi / 2 * std::sinh(t);
    const double x = std::tanh(u);
    const double c = std::cosh(u);
    const double w = h * std::numbers::pi / 2 * std::cosh(t) / (c * c);
    r.nodes.push_back(x);
    r.weights.push_back(w);
  }
  return r;
}

/// Maps a rule on [-1, 1] to [a, b].
inline Rule mapped(const Rule& r, double a, double b) {
  Rule out = r;
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    out.nodes[i] = mid + half * r.nodes[i];
    out.weights[i] = half * r.weights[i];
  }
  return out;
}

}  // namespace piih::quad
