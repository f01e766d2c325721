#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "piih/error.hpp"
#include "piih/quadrature.hpp"

namespace piih {

struct ModelParams {
  unsigned n = 1;
  std::vector<double> taus;  // tau_1 .. tau_{n-1}
  double rho = 1.0;

  void validate() const {
    if (n < 1) throw DomainError("n must be >= 1");
    if (taus.size() != n - 1)
      throw DomainError("expected " + std::to_string(n - 1) + " tau values, got " + std::to_string(taus.size()));
    for (double t : taus)
      if (!std::isfinite(t)) throw DomainError("tau values must be finite");
    if (!(rho > 0.0 && rho <= 1.0)) throw DomainError("rho must lie in (0, 1]");
  }
  bool monomial() const {
    return std::all_of(taus.begin(), taus.end(), [](double t) { return t == 0.0; });
  }
};

enum class QuadRule { GaussLegendre, TanhSinh };

/// V-shaped contour through the origin: right arm at argument `angle`, left arm
/// at pi - angle. Zero angle/radius select the defaults.
struct ContourSpec {
  double angle = 0.0;          // 0 -> pi / (2(2n+1))
  double radius = 0.0;         // 0 -> chosen from the decay of the integrand
  unsigned nodes = 200;        // per arm
  QuadRule rule = QuadRule::GaussLegendre;
  double decay_target = 45.0;  // exponent magnitude required at the cut
  bool estimate_error = true;  // second pass with half the nodes
};

struct PhiValue {
  double value = 0.0;
  double err_estimate = 0.0;
  double imag = 0.0;  // discarded imaginary part
  double radius = 0.0;
};

namespace detail {

/// Coefficients c_k of the phase P(lambda) = sum c_k lambda^k (odd k only).
inline std::vector<double> phase_coeffs(const ModelParams& p, double x) {
  const unsigned N = 2 * p.n + 1;
  std::vector<double> c(N + 1, 0.0);
  c[N] = 1.0 / N;
  for (unsigned j = 1; j < p.n; ++j) {
    const double sign = ((p.n + j) % 2 == 0) ? 1.0 : -1.0;
    c[2 * j + 1] += sign * p.taus[j - 1] / (2.0 * j + 1.0);
  }
  c[1] += x;
  return c;
}

/// -Re[i P(r e^{i a})] = sum c_k r^k sin(k a): the decay exponent on the arm.
inline double arm_decay(const std::vector<double>& c, double r, double a) {
  double acc = 0.0, rk = 1.0;
  for (std::size_t k = 0; k < c.size(); ++k, rk *= r)
    if (c[k] != 0.0) acc += c[k] * rk * std::sin(static_cast<double>(k) * a);
  return acc;
}

inline double default_angle(unsigned n) { return std::numbers::pi / (2.0 * (2.0 * n + 1.0)); }

}  // namespace detail

/// Smallest radius past which the integrand magnitude stays below e^{-target}.
inline double truncation_radius(const ModelParams& p, double x, double angle, unsigned deriv, double target) {
  const auto c = detail::phase_coeffs(p, x);
  auto g = [&](double r) { return detail::arm_decay(c, r, angle) - deriv * std::log(std::max(r, 1.0)); };
  double r = 0.5;
  for (int it = 0; it < 100000; ++it) {
    const double step = 0.02 * (1.0 + r);
    if (g(r) >= target && g(r + step) > g(r)) {
      // make sure it keeps increasing for a while (lower-order terms are dominated)
      bool ok = true;
      for (double t = r; t < 2.0 * r; t += step)
        if (g(t) < target) {
          ok = false;
          break;
        }
      if (ok) return r;
    }
    r += step;
  }
  throw ContourError("no truncation radius found");
}

namespace detail {

inline std::complex<double> arm_sum(const std::vector<double>& c, double angle, unsigned deriv, const quad::Rule& rule,
                                    double sign, double& abs_sum, double& max_exponent) {
  // sign = +1: right arm lambda = r e^{ia}; sign = -1: left arm lambda = -r e^{-ia}.
  const std::complex<double> dir = sign > 0 ? std::polar(1.0, angle) : -std::polar(1.0, -angle);
  const std::complex<double> jac = std::polar(1.0, sign > 0 ? angle : -angle);
  const std::complex<double> I(0.0, 1.0);
  std::complex<double> acc = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const std::complex<double> lam = rule.nodes[k] * dir;
    std::complex<double> P = 0.0;
    for (std::size_t d = c.size(); d-- > 0;) P = P * lam + c[d];
    const std::complex<double> e = I * P;
    max_exponent = std::max(max_exponent, e.real());
    if (e.real() > 700.0) throw OverflowError("integrand overflow on the contour");
    std::complex<double> f = std::exp(e);
    if (deriv) {
      std::complex<double> il = I * lam, pw = 1.0;
      for (unsigned j = 0; j < deriv; ++j) pw *= il;
      f *= pw;
    }
    f *= jac * rule.weights[k];
    abs_sum += std::abs(f);
    acc += f;
  }
  return acc;
}

inline std::complex<double> contour_integral(const ModelParams& p, double x, unsigned deriv, double angle, double R,
                                             unsigned m, QuadRule rule_id, double& abs_sum) {
  const auto c = phase_coeffs(p, x);
  const quad::Rule rule = quad::mapped(rule_id == QuadRule::GaussLegendre ? quad::gauss_legendre(m) : quad::tanh_sinh(m),
                                       0.0, R);
  double max_exponent = -std::numeric_limits<double>::infinity();
  abs_sum = 0.0;
  auto right = arm_sum(c, angle, deriv, rule, +1.0, abs_sum, max_exponent);
  auto left = arm_sum(c, angle, deriv, rule, -1.0, abs_sum, max_exponent);
  auto total = (right + left) / (2.0 * std::numbers::pi);
  abs_sum /= 2.0 * std::numbers::pi;
  if (!std::isfinite(total.real()) || !std::isfinite(total.imag())) throw OverflowError("non-finite contour integral");
  return total;
}

}  // namespace detail

/// deriv-th derivative of
///   phi(x) = (1/2pi) int exp(i(l^N/N + sum_j (-1)^(n+j) tau_j l^(2j+1)/(2j+1) + x l)) dl,
/// N = 2n+1, along the rotated contour.
inline PhiValue phi_eval(const ModelParams& p, double x, unsigned deriv = 0, const ContourSpec& cs = {}) {
  p.validate();
  if (!std::isfinite(x)) throw DomainError("phi evaluated at a non-finite point");
  const unsigned N = 2 * p.n + 1;
  const double angle = cs.angle == 0.0 ? detail::default_angle(p.n) : cs.angle;
  if (!(angle > 0.0 && angle < std::numbers::pi / N)) throw DomainError("contour angle outside (0, pi/(2n+1))");
  if (cs.nodes < 4) throw DomainError("contour needs at least 4 nodes per arm");
  const double R = cs.radius > 0.0 ? cs.radius : truncation_radius(p, x, angle, deriv, cs.decay_target);
  double abs_sum = 0.0;
  auto v = detail::contour_integral(p, x, deriv, angle, R, cs.nodes, cs.rule, abs_sum);
  PhiValue out;
  out.value = v.real();
  out.imag = v.imag();
  out.radius = R;
  const double floor = 4.0 * std::numeric_limits<double>::epsilon() * abs_sum;
  out.err_estimate = floor;
  if (cs.estimate_error) {
    double tmp = 0.0;
    auto coarse = detail::contour_integral(p, x, deriv, angle, R, cs.nodes / 2, cs.rule, tmp);
    out.err_estimate = std::max(floor, std::abs(coarse.real() - out.value));
  }
  if (std::abs(out.imag) / (1.0 + std::abs(out.value)) > 1e-10)
    throw ContourError("imaginary part " + std::to_string(out.imag) + " above the reality tolerance");
  return out;
}

inline double phi(const ModelParams& p, double x, unsigned deriv = 0, ContourSpec cs = {}) {
  cs.estimate_error = false;
  return phi_eval(p, x, deriv, cs).value;
}

/// Ai_{2n+1}; for n = 1 the classical Airy function. With nonzero taus this is
/// the deformed function phi.
inline double ai_gen(const ModelParams& p, double x, ContourSpec cs = {}) { return phi(p, x, 0, cs); }

/// phi(0) in the monomial case: N^(1/N - 1) Gamma(1/N) cos(pi/(2N)) / pi.
inline double phi_at_zero_monomial(unsigned n) {
  const double N = 2.0 * n + 1.0;
  return std::pow(N, 1.0 / N - 1.0) * std::tgamma(1.0 / N) * std::cos(std::numbers::pi / (2.0 * N)) /
         std::numbers::pi;
}

/// f^(2n)(x) - (-1)^(n+1) x f(x) with every derivative taken from the contour integral.
inline std::vector<double> ode_residual_ai(const ModelParams& p, std::span<const double> xs, const ContourSpec& cs = {}) {
  p.validate();
  if (!p.monomial()) throw DomainError("ODE check applies to the monomial case only");
  const double sign = (p.n % 2 == 1) ? 1.0 : -1.0;  // (-1)^(n+1)
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(phi(p, x, 2 * p.n, cs) - sign * x * phi(p, x, 0, cs));
  return out;
}

/// Piecewise Chebyshev interpolant of phi on [a, b], built from contour
/// evaluations at the Chebyshev points of each panel.
class PhiTable {
 public:
  PhiTable(const ModelParams& p, double a, double b, double panel = 0.25, unsigned degree = 18,
           const ContourSpec& cs = {})
      : a_(a), panel_(panel), degree_(degree) {
    if (!(b > a) || !(panel > 0.0)) throw DomainError("bad tabulation interval");
    panels_ = static_cast<std::size_t>(std::ceil((b - a) / panel));
    b_ = a + panels_ * panel;
    nodes_.resize(degree + 1);
    bw_.resize(degree + 1);
    for (unsigned j = 0; j <= degree; ++j) {
      nodes_[j] = std::cos(std::numbers::pi * j / degree);  // Chebyshev points of the 2nd kind
      bw_[j] = (j % 2 ? -1.0 : 1.0) * ((j == 0 || j == degree) ? 0.5 : 1.0);
    }
    values_.resize(panels_ * (degree + 1));
    for (std::size_t k = 0; k < panels_; ++k)
      for (unsigned j = 0; j <= degree; ++j)
        values_[k * (degree + 1) + j] = phi(p, a_ + panel_ * (k + 0.5 * (1.0 + nodes_[j])), 0, cs);
  }

  double lo() const { return a_; }
  double hi() const { return b_; }

  double operator()(double x) const {
    if (x < a_ || x > b_) throw DomainError("phi table evaluated outside [" + std::to_string(a_) + ", " +
                                            std::to_string(b_) + "]");
    std::size_t k = std::min(static_cast<std::size_t>((x - a_) / panel_), panels_ - 1);
    const double t = 2.0 * (x - a_ - panel_ * k) / panel_ - 1.0;
    const double* v = &values_[k * (degree_ + 1)];
    double num = 0.0, den = 0.0;
    for (unsigned j = 0; j <= degree_; ++j) {
      const double d = t - nodes_[j];
      if (d == 0.0) return v[j];
      const double w = bw_[j] / d;
      num += w * v[j];
      den += w;
    }
    return num / den;
  }

 private:
  double a_, b_ = 0.0, panel_;
  unsigned degree_;
  std::size_t panels_ = 0;
  std::vector<double> nodes_, bw_, values_;
};

/// Point past which |phi| stays below tol (searched on a 0.25 grid from x0).
inline double phi_tail_point(const ModelParams& p, double tol = 1e-16, double x0 = 0.0, const ContourSpec& cs = {}) {
  int quiet = 0;
  for (double x = x0; x < x0 + 400.0; x += 0.25) {
    const auto v = phi_eval(p, x, 0, cs);
    if (std::abs(v.value) < std::max(tol, 8.0 * v.err_estimate)) {
      if (++quiet == 4) return x - 0.75;
    } else {
      quiet = 0;
    }
  }
  throw DomainError("phi does not decay to tolerance on the search range");
}

}  // namespace piih
