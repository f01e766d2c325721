#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "piih/error.hpp"
#include "piih/rational.hpp"

namespace piih {

/// Element of Q(beta) with beta = binom(2n,n)^(1/(2n)), stored as
/// sum_{k<2n} coeffs[k] * beta^k.
///
/// x^(2n) - binom(2n,n) is Eisenstein at the prime p in (n, 2n] (p divides
/// binom(2n,n) exactly once), so Q(beta) is a field of degree 2n and every
/// nonzero element is invertible.
class AlgElem {
 public:
  AlgElem() = default;
  explicit AlgElem(unsigned n) : n_(n), c_(2 * n) {
    if (n == 0) throw DomainError("AlgElem field parameter n must be >= 1");
  }
  AlgElem(unsigned n, const Rational& q) : AlgElem(n) { c_[0] = q; }
  AlgElem(unsigned n, std::vector<Rational> coeffs) : n_(n), c_(std::move(coeffs)) {
    if (n == 0) throw DomainError("AlgElem field parameter n must be >= 1");
    if (c_.size() != 2 * n) throw DomainError("AlgElem needs exactly 2n coefficients");
  }

  /// beta^k for any integer k, reduced into the basis.
  static AlgElem beta_power(unsigned n, int k) {
    AlgElem out(n);
    const int d = static_cast<int>(2 * n);
    int q = k >= 0 ? k / d : -((-k + d - 1) / d);
    int r = k - q * d;
    out.c_[static_cast<std::size_t>(r)] = pow(Rational(field_base(n)), q);
    return out;
  }

  /// binom(2n, n), the value of beta^(2n).
  static BigInt field_base(unsigned n) { return binomial(2 * n, n); }

  unsigned n() const noexcept { return n_; }
  std::size_t degree() const noexcept { return c_.size(); }
  const std::vector<Rational>& coeffs() const noexcept { return c_; }
  const Rational& operator[](std::size_t k) const { return c_.at(k); }

  bool is_zero() const {
    for (const auto& x : c_)
      if (x != 0) return false;
    return true;
  }
  bool is_rational() const {
    for (std::size_t k = 1; k < c_.size(); ++k)
      if (c_[k] != 0) return false;
    return true;
  }

  /// If the element is c*beta^k with a single nonzero coefficient, returns (k, c).
  std::optional<std::pair<int, Rational>> single_term() const {
    std::optional<std::pair<int, Rational>> out;
    for (std::size_t k = 0; k < c_.size(); ++k) {
      if (c_[k] == 0) continue;
      if (out) return std::nullopt;
      out = std::make_pair(static_cast<int>(k), c_[k]);
    }
    return out;
  }

  AlgElem& operator+=(const AlgElem& o) {
    check_same(o);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
  }
  AlgElem& operator-=(const AlgElem& o) {
    check_same(o);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
    return *this;
  }
  AlgElem& operator*=(const Rational& q) {
    for (auto& x : c_) x *= q;
    return *this;
  }
  AlgElem& operator*=(const AlgElem& o) {
    *this = *this * o;
    return *this;
  }

  friend AlgElem operator+(AlgElem a, const AlgElem& b) { return a += b; }
  friend AlgElem operator-(AlgElem a, const AlgElem& b) { return a -= b; }
  friend AlgElem operator-(AlgElem a) {
    for (auto& x : a.c_) x = -x;
    return a;
  }
  friend AlgElem operator*(AlgElem a, const Rational& q) { return a *= q; }
  friend AlgElem operator*(const Rational& q, AlgElem a) { return a *= q; }

  friend AlgElem operator*(const AlgElem& a, const AlgElem& b) {
    a.check_same(b);
    const std::size_t d = a.c_.size();
    std::vector<Rational> prod(2 * d);
    for (std::size_t i = 0; i < d; ++i) {
      if (a.c_[i] == 0) continue;
      for (std::size_t j = 0; j < d; ++j)
        if (b.c_[j] != 0) prod[i + j] += a.c_[i] * b.c_[j];
    }
    const Rational base(field_base(a.n_));
    AlgElem out(a.n_);
    for (std::size_t k = 0; k < d; ++k) out.c_[k] = prod[k] + base * prod[k + d];
    return out;
  }

  /// Multiplicative inverse via exact Gaussian elimination on the
  /// multiplication-by-a matrix.
  AlgElem inverse() const {
    if (is_zero()) throw DomainError("inverse of zero in Q(beta)");
    if (auto t = single_term()) {
      return beta_power(n_, -t->first) * (Rational(1) / t->second);
    }
    const std::size_t d = c_.size();
    // Column j of M holds the coefficients of a*beta^j.
    std::vector<std::vector<Rational>> m(d, std::vector<Rational>(d + 1));
    for (std::size_t j = 0; j < d; ++j) {
      AlgElem col = *this * beta_power(n_, static_cast<int>(j));
      for (std::size_t i = 0; i < d; ++i) m[i][j] = col.c_[i];
    }
    m[0][d] = 1;
    for (std::size_t col = 0; col < d; ++col) {
      std::size_t piv = col;
      while (piv < d && m[piv][col] == 0) ++piv;
      if (piv == d) throw NumericError("singular multiplication matrix in Q(beta)");
      std::swap(m[piv], m[col]);
      Rational inv = Rational(1) / m[col][col];
      for (std::size_t k = col; k <= d; ++k) m[col][k] *= inv;
      for (std::size_t r = 0; r < d; ++r) {
        if (r == col || m[r][col] == 0) continue;
        Rational f = m[r][col];
        for (std::size_t k = col; k <= d; ++k) m[r][k] -= f * m[col][k];
      }
    }
    AlgElem out(n_);
    for (std::size_t i = 0; i < d; ++i) out.c_[i] = m[i][d];
    return out;
  }

  friend AlgElem operator/(const AlgElem& a, const AlgElem& b) { return a * b.inverse(); }
  friend AlgElem operator/(AlgElem a, const Rational& q) { return a *= Rational(1) / q; }

  friend bool operator==(const AlgElem& a, const AlgElem& b) {
    if (a.n_ != b.n_) return false;
    return a.c_ == b.c_;
  }

 private:
  void check_same(const AlgElem& o) const {
    if (n_ != o.n_) throw DomainError("AlgElem operands from different fields");
  }

  unsigned n_ = 1;
  std::vector<Rational> c_ = std::vector<Rational>(2);
};

/// Floating value of an element. `precision` is a target relative error; the
/// evaluation runs in 50 or 100 decimal digits depending on it and the result
/// is rounded to double.
inline double alg_to_float(const AlgElem& x, double precision = 1e-15) {
  auto eval = [&](auto tag) {
    using F = decltype(tag);
    F beta = boost::multiprecision::pow(F(AlgElem::field_base(x.n()).str()), F(1) / F(2 * x.n()));
    F acc = 0;
    for (std::size_t k = x.degree(); k-- > 0;) {
      const Rational& c = x[k];
      acc = acc * beta + F(numerator_of(c).str()) / F(denominator_of(c).str());
    }
    return static_cast<double>(acc);
  };
  if (precision < 1e-45) return eval(boost::multiprecision::cpp_bin_float_100());
  return eval(boost::multiprecision::cpp_bin_float_50());
}

/// Human form: "-(1/12)", "-(1/54)*beta^2", "(1/2 + (3)*beta)".
inline std::string to_human(const AlgElem& x) {
  auto term = [](const Rational& c, std::size_t k, bool leading) {
    std::string out;
    Rational a = c < 0 ? Rational(-c) : c;
    if (c < 0) out += leading ? "-" : " - ";
    else if (!leading) out += " + ";
    std::string mag = "(" + to_string(a) + ")";
    if (k == 0) return out + mag;
    std::string b = k == 1 ? "beta" : "beta^" + std::to_string(k);
    if (a == 1) return out + b;
    return out + mag + "*" + b;
  };
  std::vector<std::size_t> nz;
  for (std::size_t k = 0; k < x.degree(); ++k)
    if (x[k] != 0) nz.push_back(k);
  if (nz.empty()) return "0";
  if (nz.size() == 1) return term(x[nz[0]], nz[0], true);
  std::string out = "(";
  for (std::size_t i = 0; i < nz.size(); ++i) out += term(x[nz[i]], nz[i], i == 0);
  return out + ")";
}

}  // namespace piih
