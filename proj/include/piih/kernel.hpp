#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <vector>

#include "piih/error.hpp"
#include "piih/nystrom.hpp"
#include "piih/quadrature.hpp"
#include "piih/specfun.hpp"

namespace piih {

/// Factored kernel K(x,y) = int_0^inf phi(x+u) phi(y+u) du.
struct KernelEval {
  ModelParams params;
  ContourSpec contour;
  unsigned u_nodes = 80;
  double tail_tol = 1e-16;
  double x_tail = 0.0;                     // |phi| < tail_tol beyond this point
  std::shared_ptr<const PhiTable> table;   // optional interpolant on [lo, x_tail]

  static KernelEval make(const ModelParams& p, const ContourSpec& cs = {}, unsigned u_nodes = 80,
                         double tail_tol = 1e-16) {
    p.validate();
    if (u_nodes < 2) throw DomainError("u-quadrature needs at least two nodes");
    KernelEval ke;
    ke.params = p;
    ke.contour = cs;
    ke.u_nodes = u_nodes;
    ke.tail_tol = tail_tol;
    ke.x_tail = phi_tail_point(p, tail_tol, 0.0, cs);
    return ke;
  }

  /// Tabulates phi on [lo, x_tail]; later evaluations inside use the table.
  void tabulate(double lo) {
    if (lo >= x_tail) return;
    if (table && table->lo() <= lo) return;
    table = std::make_shared<PhiTable>(params, lo, x_tail, 0.25, 18, contour);
  }

  double phi_at(double x) const {
    if (x >= x_tail) return 0.0;
    if (table && x >= table->lo()) return (*table)(x);
    return phi(params, x, 0, contour);
  }

  /// Gauss-Legendre nodes/weights of the u-integral on [0, U].
  quad::Rule u_rule(double U) const { return quad::mapped(quad::gauss_legendre(u_nodes), 0.0, U); }
};

inline double kernel_factored(const KernelEval& ke, double x, double y) {
  const double U = ke.x_tail - std::min(x, y);
  if (U <= 0.0) return 0.0;
  const auto r = ke.u_rule(U);
  double acc = 0.0;
  for (std::size_t k = 0; k < r.nodes.size(); ++k)
    acc += r.weights[k] * (ke.phi_at(x + r.nodes[k]) * ke.phi_at(y + r.nodes[k]));  // product first: exact symmetry
  return acc;
}

/// Matrix A with A_ik = phi(x_i + u_k) sqrt(w_k) on a common u-range [0, x_tail - min x],
/// so that K(x_i, x_j) = (A A^T)_ij.
inline Eigen::MatrixXd kernel_factor_matrix(const KernelEval& ke, const std::vector<double>& xs) {
  if (xs.empty()) return {};
  const double lo = *std::min_element(xs.begin(), xs.end());
  const double U = ke.x_tail - lo;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(xs.size()), ke.u_nodes);
  if (U <= 0.0) return A;
  const auto r = ke.u_rule(U);
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t k = 0; k < r.nodes.size(); ++k)
      A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          ke.phi_at(xs[i] + r.nodes[k]) * std::sqrt(r.weights[k]);
  return A;
}

namespace detail {

/// p_{2n+1}(z) = z^N/N + sum_j tau_j z^(2j+1)/(2j+1).
inline std::complex<double> p_poly(const ModelParams& p, std::complex<double> z) {
  const unsigned N = 2 * p.n + 1;
  std::vector<double> c(N + 1, 0.0);
  c[N] = 1.0 / N;
  for (unsigned j = 1; j < p.n; ++j) c[2 * j + 1] = p.taus[j - 1] / (2.0 * j + 1.0);
  std::complex<double> acc = 0.0;
  for (std::size_t d = c.size(); d-- > 0;) acc = acc * z + c[d];
  return acc;
}

struct ContourNodes {
  std::vector<std::complex<double>> z;
  std::vector<std::complex<double>> dz;  // weight times dz/dr, orientation included
};

/// V with vertex `vertex` and arms at +-angle. downward = true traverses the
/// upper arm inward and the lower arm outward.
inline ContourNodes v_contour(double vertex, double angle, double R, unsigned m, bool downward) {
  const auto rule = quad::mapped(quad::gauss_legendre(m), 0.0, R);
  ContourNodes out;
  const auto up = std::polar(1.0, angle), lo = std::polar(1.0, -angle);
  const double s = downward ? 1.0 : -1.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    out.z.push_back(vertex + rule.nodes[k] * up);
    out.dz.push_back(-s * rule.weights[k] * up);
    out.z.push_back(vertex + rule.nodes[k] * lo);
    out.dz.push_back(s * rule.weights[k] * lo);
  }
  return out;
}

/// Radius beyond which Re(expo(r e^{i a} + vertex)) < -target on both arms.
template <class F>
double contour_radius(F expo, double vertex, double angle, double target) {
  double r = 0.5;
  for (int it = 0; it < 100000; ++it) {
    const double step = 0.02 * (1.0 + r);
    auto val = [&](double t) {
      return std::max(expo(vertex + t * std::polar(1.0, angle)).real(), expo(vertex + t * std::polar(1.0, -angle)).real());
    };
    if (val(r) < -target && val(r + step) < val(r)) {
      bool ok = true;
      for (double t = r; t < 2.0 * r; t += step)
        if (val(t) > -target) {
          ok = false;
          break;
        }
      if (ok) return r;
    }
    r += step;
  }
  throw ContourError("no contour truncation radius found");
}

}  // namespace detail

/// Double-contour form
///   K(x,y) = (2 pi i)^-2 int_{gR} dmu int_{gL} dl e^{(-1)^(n+1)(p(mu)-p(l)) - x mu + y l} / (l - mu),
/// gR: vertex +delta, arms at +-n pi/N, downward; gL: vertex -delta, arms at
/// +-(n+1) pi/N, upward. Cross-check oracle only (quadratic cost).
inline double kernel_contour(const KernelEval& ke, double x, double y, unsigned m = 120, double delta = 0.5) {
  const ModelParams& p = ke.params;
  const unsigned N = 2 * p.n + 1;
  const double sgn = (p.n % 2 == 1) ? 1.0 : -1.0;  // (-1)^(n+1)
  const double aR = p.n * std::numbers::pi / N, aL = (p.n + 1) * std::numbers::pi / N;
  auto eR = [&](std::complex<double> mu) { return sgn * detail::p_poly(p, mu) - x * mu; };
  auto eL = [&](std::complex<double> l) { return -sgn * detail::p_poly(p, l) + y * l; };
  const double target = 40.0;
  const auto gR = detail::v_contour(delta, aR, detail::contour_radius(eR, delta, aR, target), m, true);
  const auto gL = detail::v_contour(-delta, aL, detail::contour_radius(eL, -delta, aL, target), m, false);
  std::vector<std::complex<double>> fR(gR.z.size()), fL(gL.z.size());
  for (std::size_t i = 0; i < gR.z.size(); ++i) fR[i] = std::exp(eR(gR.z[i])) * gR.dz[i];
  for (std::size_t j = 0; j < gL.z.size(); ++j) fL[j] = std::exp(eL(gL.z[j])) * gL.dz[j];
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < fR.size(); ++i) {
    std::complex<double> row = 0.0;
    for (std::size_t j = 0; j < fL.size(); ++j) row += fL[j] / (gL.z[j] - gR.z[i]);
    acc += fR[i] * row;
  }
  const std::complex<double> twopii(0.0, 2.0 * std::numbers::pi);
  const auto K = acc / (twopii * twopii);
  if (!std::isfinite(K.real())) throw OverflowError("double-contour kernel overflowed");
  if (std::abs(K.imag()) > 1e-8 * (1.0 + std::abs(K.real())))
    throw ContourError("double-contour kernel has a non-negligible imaginary part");
  return K.real();
}

struct DppReport {
  double min_eig = 0.0;
  double max_eig = 0.0;
  double symmetry_defect = 0.0;     // max |M - M^T|
  double projection_defect = 0.0;   // ||M^2 - M||_inf on [-T, T]; reported, not asserted
  std::vector<double> eigenvalues;
};

/// Symmetrized Nystrom matrix sqrt(w_i) K(x_i,x_j) sqrt(w_j) on (s, inf).
inline Eigen::MatrixXd nystrom_matrix(const KernelEval& ke, const HalfLineNodes& nodes) {
  Eigen::MatrixXd A = kernel_factor_matrix(ke, nodes.x);
  for (Eigen::Index i = 0; i < A.rows(); ++i) A.row(i) *= std::sqrt(nodes.w[static_cast<std::size_t>(i)]);
  Eigen::MatrixXd M = A * A.transpose();
  return 0.5 * (M + M.transpose());
}

inline DppReport dpp_hypotheses_check(const KernelEval& ke, double s, unsigned m, double rho_scale = 1.0,
                                      double window = 6.0) {
  if (m < 10) throw DomainError("DPP check needs at least 10 nodes");
  const auto nodes = half_line_nodes(s, m);
  Eigen::MatrixXd A = kernel_factor_matrix(ke, nodes.x);
  for (Eigen::Index i = 0; i < A.rows(); ++i) A.row(i) *= std::sqrt(nodes.w[static_cast<std::size_t>(i)]);
  Eigen::MatrixXd raw = rho_scale * (A * A.transpose());
  DppReport rep;
  rep.symmetry_defect = (raw - raw.transpose()).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (raw + raw.transpose()), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("eigenvalue solver failed");
  rep.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  rep.min_eig = es.eigenvalues().minCoeff();
  rep.max_eig = es.eigenvalues().maxCoeff();

  // projection defect on a symmetric window
  const double T = std::min(window, ke.x_tail);
  const auto r = quad::mapped(quad::gauss_legendre(m), -T, T);
  Eigen::MatrixXd B = kernel_factor_matrix(ke, r.nodes);
  for (Eigen::Index i = 0; i < B.rows(); ++i) B.row(i) *= std::sqrt(r.weights[static_cast<std::size_t>(i)]);
  Eigen::MatrixXd M = rho_scale * (B * B.transpose());
  Eigen::MatrixXd D = M * M - M;
  rep.projection_defect = D.cwiseAbs().rowwise().sum().maxCoeff();
  return rep;
}

}  // namespace piih
