#pragma once

// Real-coefficient polynomials in one variable. Evaluation is overflow-safe
// for |s| > 1 through the reversed-Horner form p(s) = s^deg q(1/s), gcd is a
// guarded Euclid that refuses reductions it cannot verify by back-division,
// and roots come from a variable-scaled companion matrix.

#include <cmath>
#include <complex>
#include <initializer_list>
#include <vector>

#include "mcic/matcore.hpp"

namespace mcic {

struct PolynomialDivMod;

class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(std::initializer_list<double> ascending) : c_(ascending) {
    trim();
  }
  explicit Polynomial(std::vector<double> ascending) : c_(std::move(ascending)) {
    trim();
  }

  static Polynomial zero() { return Polynomial(); }
  static Polynomial one() { return Polynomial({1.0}); }
  static Polynomial variable() { return Polynomial({0.0, 1.0}); }
  static Polynomial constant(double v) { return Polynomial({v}); }

  // -1 for the zero polynomial.
  int degree() const { return int(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<double>& coeffs() const { return c_; }
  double coeff(size_t k) const { return k < c_.size() ? c_[k] : 0.0; }
  double leading() const { return c_.empty() ? 0.0 : c_.back(); }

  double max_abs_coeff() const {
    double m = 0.0;
    for (double v : c_) m = std::max(m, std::abs(v));
    return m;
  }

  // Strips leading coefficients that are exactly zero, or relatively below
  // rel * max|c| when rel > 0. Interior coefficients are never touched.
  void trim(double rel = 0.0) {
    double cut = rel > 0.0 ? rel * max_abs_coeff() : 0.0;
    while (!c_.empty() && std::abs(c_.back()) <= cut) c_.pop_back();
  }

  // Value represented as mantissa * s^exponent; |mantissa| stays at
  // coefficient scale for any |s|.
  struct ScaledValue {
    Complex mantissa{0.0, 0.0};
    int exponent = 0;
  };

  ScaledValue eval_scaled(Complex s) const {
    ScaledValue v;
    if (c_.empty()) return v;
    if (std::abs(s) <= 1.0) {
      Complex acc = 0.0;
      for (size_t k = c_.size(); k-- > 0;) acc = acc * s + c_[k];
      v.mantissa = acc;
      return v;
    }
    Complex r = 1.0 / s;
    Complex acc = 0.0;
    for (double ck : c_) acc = acc * r + ck;  // ascending order = reversed
    v.mantissa = acc;
    v.exponent = degree();
    return v;
  }

  // sum_k |c_k| |s|^k in the same mantissa/exponent convention; used to judge
  // cancellation (|p(s)| / p_abs(|s|) small means s is near a root).
  double eval_abs_scaled(double r) const {
    if (c_.empty()) return 0.0;
    double acc = 0.0;
    if (r <= 1.0) {
      for (size_t k = c_.size(); k-- > 0;) acc = acc * r + std::abs(c_[k]);
      return acc;
    }
    double inv = 1.0 / r;
    for (double ck : c_) acc = acc * inv + std::abs(ck);
    return acc;
  }

  Complex operator()(Complex s) const {
    ScaledValue v = eval_scaled(s);
    return v.mantissa * std::pow(s, v.exponent);
  }

  double operator()(double s) const {
    if (c_.empty()) return 0.0;
    if (std::abs(s) <= 1.0) {
      double acc = 0.0;
      for (size_t k = c_.size(); k-- > 0;) acc = acc * s + c_[k];
      return acc;
    }
    double inv = 1.0 / s;
    double acc = 0.0;
    for (double ck : c_) acc = acc * inv + ck;
    return acc * std::pow(s, degree());
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
    for (size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
  }

  Polynomial& operator-=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
    for (size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim();
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) {
    a += b;
    return a;
  }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) {
    a -= b;
    return a;
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return Polynomial();
    std::vector<double> out(a.c_.size() + b.c_.size() - 1, 0.0);
    for (size_t i = 0; i < a.c_.size(); ++i) {
      for (size_t j = 0; j < b.c_.size(); ++j) {
        out[i + j] += a.c_[i] * b.c_[j];
      }
    }
    return Polynomial(std::move(out));
  }

  friend Polynomial operator*(double k, Polynomial p) {
    for (double& c : p.c_) c *= k;
    p.trim();
    return p;
  }

  Polynomial operator-() const { return -1.0 * *this; }

  using DivMod = PolynomialDivMod;

  // Long division; requires a non-zero divisor. Defined after PolynomialDivMod.
  DivMod divmod(const Polynomial& d) const;

  Polynomial derivative() const {
    if (degree() < 1) return Polynomial();
    std::vector<double> out(c_.size() - 1);
    for (size_t k = 1; k < c_.size(); ++k) out[k - 1] = double(k) * c_[k];
    return Polynomial(std::move(out));
  }

  Polynomial monic() const {
    require(!is_zero(), "Polynomial::monic: zero polynomial");
    return (1.0 / leading()) * *this;
  }

  // Roots via the companion matrix of the monic, variable-scaled polynomial.
  std::vector<Complex> roots() const {
    int d = degree();
    if (d <= 0) return {};
    if (d == 1) return {Complex(-c_[0] / c_[1], 0.0)};
    // Equilibrate root magnitudes: substitute s = gamma x.
    double gamma = 1.0;
    if (c_[0] != 0.0) {
      gamma = std::pow(std::abs(c_[0] / c_.back()), 1.0 / double(d));
      gamma = std::clamp(gamma, 1e-6, 1e6);
    }
    std::vector<double> sc(c_.size());
    double g = 1.0;
    for (size_t k = 0; k < c_.size(); ++k) {
      sc[k] = c_[k] * g;
      g *= gamma;
    }
    double lead = sc.back();
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(d, d);
    for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) comp(i, d - 1) = -sc[size_t(i)] / lead;
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    std::vector<Complex> out;
    out.resize(size_t(d));
    for (int i = 0; i < d; ++i) out[size_t(i)] = gamma * es.eigenvalues()(i);
    return out;
  }

 private:
  std::vector<double> c_;  // ascending; invariant: back() != 0 when non-empty
};

struct PolynomialDivMod {
  Polynomial quotient;
  Polynomial remainder;
};

inline PolynomialDivMod Polynomial::divmod(const Polynomial& d) const {
  require(!d.is_zero(), "Polynomial::divmod: division by zero polynomial");
  PolynomialDivMod out;
  if (degree() < d.degree()) {
    out.remainder = *this;
    return out;
  }
  std::vector<double> rem = c_;
  std::vector<double> quot(size_t(degree() - d.degree()) + 1, 0.0);
  double lead = d.leading();
  for (int k = degree() - d.degree(); k >= 0; --k) {
    double q = rem[size_t(k + d.degree())] / lead;
    quot[size_t(k)] = q;
    for (int j = 0; j <= d.degree(); ++j) {
      rem[size_t(k + j)] -= q * d.coeff(size_t(j));
    }
  }
  rem.resize(size_t(d.degree() > 0 ? d.degree() : 0));
  out.quotient = Polynomial(std::move(quot));
  out.remainder = Polynomial(std::move(rem));
  return out;
}

// Guarded Euclid. Remainders are zero-collapsed at residue scale so the
// iteration terminates, and a non-trivial candidate is accepted only when
// dividing it out of both inputs leaves relative residue <= verify_tol.
// Returns 1 whenever verification fails; skipping a reduction never changes
// the represented rational function.
inline Polynomial polynomial_gcd(const Polynomial& a, const Polynomial& b,
                                 double cleanup_rel = 1e-12,
                                 double verify_tol = 1e-8) {
  if (a.is_zero()) return b.is_zero() ? Polynomial() : b.monic();
  if (b.is_zero()) return a.monic();
  Polynomial x = (1.0 / a.max_abs_coeff()) * a;
  Polynomial y = (1.0 / b.max_abs_coeff()) * b;
  if (x.degree() < y.degree()) std::swap(x, y);
  while (!y.is_zero() && y.degree() > 0) {
    Polynomial r = x.divmod(y).remainder;
    if (!r.is_zero()) {
      // Collapse pure rounding residue relative to the operand scale.
      if (r.max_abs_coeff() <= cleanup_rel * std::max(1.0, y.max_abs_coeff())) {
        r = Polynomial();
      } else {
        r.trim(cleanup_rel);
        r = (1.0 / r.max_abs_coeff()) * r;
      }
    }
    x = y;
    y = r;
  }
  if (!y.is_zero()) return Polynomial::one();  // constant gcd
  if (x.degree() == 0) return Polynomial::one();
  Polynomial g = x.monic();
  for (const Polynomial* p : {&a, &b}) {
    Polynomial rem = p->divmod(g).remainder;
    if (rem.max_abs_coeff() > verify_tol * p->max_abs_coeff()) {
      return Polynomial::one();
    }
  }
  return g;
}

// Quotient after dividing out a verified factor. The quotient of long
// division has structurally exact degree (its leading coefficient is
// lead(p)/lead(g)), so no threshold cleanup is applied here: a relative trim
// would corrupt polynomials whose coefficient range is wide, e.g. powers of
// (s + 100).
inline Polynomial polynomial_exact_divide(const Polynomial& p,
                                          const Polynomial& g) {
  return p.divmod(g).quotient;
}

}  // namespace mcic
