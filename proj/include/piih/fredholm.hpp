#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "piih/error.hpp"
#include "piih/finite_diff.hpp"
#include "piih/kernel.hpp"
#include "piih/nystrom.hpp"
#include "piih/specfun.hpp"

namespace piih {

struct NystromSystem {
  double s = 0.0;
  ModelParams params;
  HalfLineNodes nodes;
  Eigen::MatrixXd matrix;  // sqrt(w_i) K(x_i,x_j) sqrt(w_j)
};

struct FredholmOptions {
  HalfLineMap map = HalfLineMap::Rational;
  double scale = 2.0;          // L of the rational map
  bool estimate_error = true;  // compare against 2m nodes
};

inline NystromSystem assemble_nystrom(const KernelEval& ke, double s, unsigned m, const FredholmOptions& opt = {}) {
  if (m < 10) throw DomainError("Nystrom discretization needs m >= 10");
  NystromSystem sys;
  sys.s = s;
  sys.params = ke.params;
  const double T = ke.x_tail - s;
  if (opt.map == HalfLineMap::Truncated && T <= 0.0) {
    sys.nodes = half_line_nodes(s, m, HalfLineMap::Rational, opt.scale);
  } else {
    sys.nodes = half_line_nodes(s, m, opt.map, opt.scale, T);
  }
  sys.matrix = nystrom_matrix(ke, sys.nodes);
  if (!sys.matrix.allFinite()) throw NumericError("non-finite Nystrom matrix entry");
  return sys;
}

struct LogDet {
  double logF = 0.0;
  double err_estimate = 0.0;
  std::vector<double> eigenvalues;
};

namespace detail {

inline LogDet logdet_of(const NystromSystem& sys, double rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sys.matrix, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("eigenvalue solver failed");
  LogDet out;
  out.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  for (double lam : out.eigenvalues) {
    const double f = 1.0 - rho * lam;
    if (!(f > 0.0))
      throw DeterminantSignError("factor 1 - rho*lambda = " + std::to_string(f) + " at s = " + std::to_string(sys.s));
    out.logF += std::log1p(-rho * lam);
  }
  return out;
}

}  // namespace detail

/// log det(I - rho K) on L^2(s, inf).
inline LogDet fredholm_logdet(const KernelEval& ke, double s, unsigned m, const FredholmOptions& opt = {}) {
  const double rho = ke.params.rho;
  LogDet out = detail::logdet_of(assemble_nystrom(ke, s, m, opt), rho);
  if (opt.estimate_error) {
    const LogDet fine = detail::logdet_of(assemble_nystrom(ke, s, 2 * m, opt), rho);
    out.err_estimate = std::abs(fine.logF - out.logF);
  }
  return out;
}

inline LogDet fredholm_logdet(const ModelParams& p, double s, unsigned m, const FredholmOptions& opt = {}) {
  KernelEval ke = KernelEval::make(p);
  ke.tabulate(s);
  return fredholm_logdet(ke, s, m, opt);
}

/// Samples of F(s) and of q^2((-1)^(n+1) s) = -(log F)''.
struct GapProfile {
  unsigned n = 1;
  double rho = 1.0;
  std::vector<double> s, logF, dlogF, q2, q, err;
  double h() const { return s.size() > 1 ? s[1] - s[0] : 0.0; }
};

struct ProfileOptions {
  unsigned m = 60;
  unsigned fd_order = 6;
  bool estimate_error = false;
  double q2_tolerance = 1e-6;
  FredholmOptions fredholm{};
};

/// Uniform grid s0, s0+h, ..., count points.
inline std::vector<double> uniform_grid(double a, double b, double h) {
  if (!(h > 0.0) || b < a) throw DomainError("bad grid specification");
  const auto count = static_cast<std::size_t>(std::floor((b - a) / h + 1e-9)) + 1;
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i) g[i] = a + h * static_cast<double>(i);
  return g;
}

inline GapProfile gap_profile(const ModelParams& p, const std::vector<double>& grid, const ProfileOptions& opt = {}) {
  p.validate();
  if (grid.size() < 2) throw DomainError("profile grid needs at least two points");
  if (opt.fd_order != 4 && opt.fd_order != 6 && opt.fd_order != 8)
    throw DomainError("finite-difference order must be 4, 6 or 8");
  const double h = grid[1] - grid[0];
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (std::abs(grid[i] - grid[i - 1] - h) > 1e-9 * std::max(1.0, std::abs(h))) throw DomainError("grid must be uniform");
  if (!(h > 0.0)) throw DomainError("grid must be increasing");
  const std::size_t hw = std::max(fd::centered_half_width(1, opt.fd_order), fd::centered_half_width(2, opt.fd_order));
  const std::size_t total = grid.size() + 2 * hw;
  const double start = grid.front() - h * static_cast<double>(hw);

  KernelEval ke = KernelEval::make(p);
  ke.tabulate(start);
  std::vector<double> logF(total), err(total, 0.0);
  FredholmOptions fo = opt.fredholm;
  fo.estimate_error = opt.estimate_error;
  for (std::size_t i = 0; i < total; ++i) {
    const auto ld = fredholm_logdet(ke, start + h * static_cast<double>(i), opt.m, fo);
    logF[i] = ld.logF;
    err[i] = ld.err_estimate;
  }
  const auto d1 = fd::centered_derivative(logF, h, 1, opt.fd_order);
  const auto d2 = fd::centered_derivative(logF, h, 2, opt.fd_order);
  GapProfile out;
  out.n = p.n;
  out.rho = p.rho;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const std::size_t i = k + hw;
    const double q2 = -d2[i];
    if (q2 < -opt.q2_tolerance)
      throw ConsistencyError("q^2 = " + std::to_string(q2) + " < 0 at s = " + std::to_string(grid[k]));
    out.s.push_back(grid[k]);
    out.logF.push_back(logF[i]);
    out.dlogF.push_back(d1[i]);
    out.q2.push_back(q2);
    out.q.push_back(std::sqrt(std::max(q2, 0.0)));
    out.err.push_back(err[i]);
  }
  return out;
}

namespace detail {

/// Weights integrating the degree-(k-1) interpolant through the nodes `offsets`
/// (in units of h) over [0, 1].
inline const std::vector<double>& interval_weights(const std::vector<int>& offsets) {
  static std::map<std::vector<int>, std::vector<double>> cache;
  if (auto it = cache.find(offsets); it != cache.end()) return it->second;
  const auto k = static_cast<Eigen::Index>(offsets.size());
  Eigen::MatrixXd V(k, k);
  Eigen::VectorXd mom(k);
  for (Eigen::Index p = 0; p < k; ++p) {
    for (Eigen::Index j = 0; j < k; ++j) V(p, j) = std::pow(static_cast<double>(offsets[static_cast<std::size_t>(j)]), static_cast<double>(p));
    mom(p) = 1.0 / static_cast<double>(p + 1);
  }
  Eigen::VectorXd w = V.colPivHouseholderQr().solve(mom);
  return cache.emplace(offsets, std::vector<double>(w.data(), w.data() + k)).first->second;
}

/// Right-cumulative integrals C_i = int_{x_i}^{x_end} f using local degree-7 interpolation.
inline std::vector<double> right_cumulative(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  std::vector<double> C(n, 0.0);
  const int width = 8;
  if (n < static_cast<std::size_t>(width)) throw DomainError("grid too short for the identity check");
  for (std::size_t i = n - 1; i-- > 0;) {
    // stencil centred on [i, i+1], clamped to the grid
    long first = static_cast<long>(i) - (width / 2 - 1);
    first = std::clamp(first, 0L, static_cast<long>(n) - width);
    std::vector<int> offs(width);
    for (int j = 0; j < width; ++j) offs[static_cast<std::size_t>(j)] = static_cast<int>(first + j - static_cast<long>(i));
    const auto& w = interval_weights(offs);
    double piece = 0.0;
    for (int j = 0; j < width; ++j) piece += w[static_cast<std::size_t>(j)] * f[static_cast<std::size_t>(first + j)];
    C[i] = C[i + 1] + h * piece;
  }
  return C;
}

}  // namespace detail

/// int_s^inf q^2 over the profile grid; equals d/ds log F after one integration by parts.
inline std::vector<double> dlogF_from_q2(const GapProfile& pr) { return detail::right_cumulative(pr.q2, pr.h()); }

/// Reconstructs log F(s) = -int_s^inf (x - s) q^2 dx from the profile and returns
/// the largest deviation from the directly computed log F.
inline double tw_identity_check(const GapProfile& pr, double tail_tol = 1e-8) {
  const std::size_t n = pr.s.size();
  if (n < 8) throw DomainError("profile too short for the identity check");
  const double h = pr.h();
  // tail beyond the grid: q^2 decays at least exponentially; bound it by the last sample times the span
  const double span = pr.s.back() - pr.s.front() + 1.0;
  const double tail = span * std::abs(pr.q2.back()) + std::abs(pr.logF.back());
  if (tail > tail_tol)
    throw DomainError("profile does not extend far enough right (tail estimate " + std::to_string(tail) + ")");
  std::vector<double> xq2(n);
  for (std::size_t i = 0; i < n; ++i) xq2[i] = pr.s[i] * pr.q2[i];
  const auto I0 = detail::right_cumulative(pr.q2, h);
  const auto I1 = detail::right_cumulative(xq2, h);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double rec = -(I1[i] - pr.s[i] * I0[i]);
    worst = std::max(worst, std::abs(rec - pr.logF[i]));
  }
  return worst;
}

struct TailReport {
  std::vector<double> s, q, ai, rel_err;
  double max_rel_err() const {
    double m = 0.0;
    for (double e : rel_err) m = std::max(m, e);
    return m;
  }
};

/// |q| / |sqrt(rho) Ai_{2n+1}| - 1 at profile points with s >= s_min. The profile
/// only knows q^2, so magnitudes are compared (Ai_{2n+1} oscillates for n even).
inline TailReport tail_check(const ModelParams& p, const GapProfile& pr, double s_min) {
  p.validate();
  if (!p.monomial()) throw DomainError("tail relation is established for the monomial case only");
  TailReport rep;
  for (std::size_t i = 0; i < pr.s.size(); ++i) {
    if (pr.s[i] < s_min) continue;
    const double ai = std::sqrt(p.rho) * ai_gen(p, pr.s[i]);
    if (!(std::abs(ai) > 1e-250)) throw RegimeError("Ai value underflows on the tail window");
    rep.s.push_back(pr.s[i]);
    rep.q.push_back(pr.q[i]);
    rep.ai.push_back(ai);
    rep.rel_err.push_back(std::abs(std::abs(pr.q[i]) / std::abs(ai) - 1.0));
  }
  if (rep.s.empty()) throw RegimeError("tail window is empty");
  return rep;
}

/// Samples of q on its own axis y = (-1)^(n+1) s, increasing in y, for the
/// hierarchy residual: returns (y0, h, values).
struct HierarchySamples {
  double y0 = 0.0;
  double h = 0.0;
  std::vector<double> q;
};

inline HierarchySamples hierarchy_axis(const GapProfile& pr) {
  HierarchySamples out;
  out.h = pr.h();
  if (pr.n % 2 == 1) {
    out.y0 = pr.s.front();
    out.q = pr.q;
  } else {
    out.y0 = -pr.s.back();
    out.q.assign(pr.q.rbegin(), pr.q.rend());
  }
  return out;
}

}  // namespace piih
