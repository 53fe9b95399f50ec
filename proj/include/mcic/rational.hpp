#pragma once

// Rational functions with real coefficients, scalar and square-matrix valued.
// Entries stay reduced (verified gcd only) with monic denominators; matrix
// inversion goes through the adjugate over the rational-function field, so an
// identically-singular input is detected symbolically rather than at a sample
// point.

#include <optional>
#include <vector>

#include "mcic/polynomial.hpp"

namespace mcic {

class Rational {
 public:
  Rational() : num_(), den_(Polynomial::one()) {}
  Rational(Polynomial num, Polynomial den)
      : num_(std::move(num)), den_(std::move(den)) {
    require(!den_.is_zero(), "Rational: zero denominator");
    reduce();
  }

  static Rational constant(double v) {
    return Rational(Polynomial::constant(v), Polynomial::one());
  }
  static Rational variable() {
    return Rational(Polynomial::variable(), Polynomial::one());
  }

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  struct Eval {
    Complex value{0.0, 0.0};
    // |den(s)| relative to the cancellation-free bound; ~0 means s sits on
    // (or numerically indistinguishable from) a pole.
    double den_headroom = 1.0;
  };

  Eval operator()(Complex s) const {
    Eval e;
    Polynomial::ScaledValue n = num_.eval_scaled(s);
    Polynomial::ScaledValue d = den_.eval_scaled(s);
    double dabs = den_.eval_abs_scaled(std::abs(s));
    e.den_headroom = dabs > 0.0 ? std::abs(d.mantissa) / dabs : 0.0;
    e.value = (n.mantissa / d.mantissa) *
              std::pow(s, double(n.exponent - d.exponent));
    return e;
  }

  Rational operator+(const Rational& o) const {
    return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  }
  Rational operator-(const Rational& o) const {
    return Rational(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
  }
  Rational operator*(const Rational& o) const {
    return Rational(num_ * o.num_, den_ * o.den_);
  }
  friend Rational operator*(double k, const Rational& r) {
    return Rational(k * r.num_, r.den_);
  }
  Rational operator-() const { return -1.0 * *this; }

  Rational reciprocal() const {
    require(!num_.is_zero(), "Rational::reciprocal: zero function");
    return Rational(den_, num_);
  }

  Rational operator/(const Rational& o) const { return *this * o.reciprocal(); }

  int max_degree() const { return std::max(num_.degree(), den_.degree()); }

 private:
  void reduce() {
    if (num_.is_zero()) {
      den_ = Polynomial::one();
      return;
    }
    Polynomial g = polynomial_gcd(num_, den_);
    if (g.degree() >= 1) {
      num_ = polynomial_exact_divide(num_, g);
      den_ = polynomial_exact_divide(den_, g);
    }
    // Canonical form: monic denominator, at a numerically safe scale.
    double lead = den_.leading();
    num_ = (1.0 / lead) * num_;
    den_ = (1.0 / lead) * den_;
  }

  Polynomial num_;
  Polynomial den_;
};

// Cross-multiplied comparison, robust to normalization differences.
inline bool rational_approx_equal(const Rational& a, const Rational& b,
                                  double tol = 1e-9) {
  Polynomial diff = a.num() * b.den() - b.num() * a.den();
  double scale = std::max({1.0, (a.num() * b.den()).max_abs_coeff(),
                           (b.num() * a.den()).max_abs_coeff()});
  return diff.max_abs_coeff() <= tol * scale;
}

// Coefficient-wise comparison of the reduced canonical forms.
inline bool rational_coeffs_match(const Rational& a, const Rational& b,
                                  double tol = 1e-9) {
  if (a.num().degree() != b.num().degree() ||
      a.den().degree() != b.den().degree()) {
    return false;
  }
  double scale = std::max({1.0, a.num().max_abs_coeff(),
                           a.den().max_abs_coeff()});
  for (int k = 0; k <= a.num().degree(); ++k) {
    if (std::abs(a.num().coeff(size_t(k)) - b.num().coeff(size_t(k))) >
        tol * scale) {
      return false;
    }
  }
  for (int k = 0; k <= a.den().degree(); ++k) {
    if (std::abs(a.den().coeff(size_t(k)) - b.den().coeff(size_t(k))) >
        tol * scale) {
      return false;
    }
  }
  return true;
}

class RationalMatrix {
 public:
  RationalMatrix() : m_(0) {}
  explicit RationalMatrix(int m)
      : m_(m), e_(size_t(m) * size_t(m)) {
    require(m >= 1, "RationalMatrix: size must be positive");
  }

  static RationalMatrix identity(int m) {
    RationalMatrix r(m);
    for (int i = 0; i < m; ++i) r.at(i, i) = Rational::constant(1.0);
    return r;
  }

  static RationalMatrix zero(int m) { return RationalMatrix(m); }

  // f * I_m, the diagonal lift of a scalar function.
  static RationalMatrix scalar_lift(const Rational& f, int m) {
    RationalMatrix r(m);
    for (int i = 0; i < m; ++i) r.at(i, i) = f;
    return r;
  }

  int size() const { return m_; }
  Rational& at(int i, int j) { return e_[size_t(i) * size_t(m_) + size_t(j)]; }
  const Rational& at(int i, int j) const {
    return e_[size_t(i) * size_t(m_) + size_t(j)];
  }

  struct Eval {
    Matrix value;
    double min_den_headroom = 1.0;  // min over entries
  };

  Eval operator()(Complex s) const {
    Eval out;
    out.value = Matrix::Zero(m_, m_);
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < m_; ++j) {
        Rational::Eval e = at(i, j)(s);
        out.value(i, j) = e.value;
        out.min_den_headroom = std::min(out.min_den_headroom, e.den_headroom);
      }
    }
    return out;
  }

  RationalMatrix operator+(const RationalMatrix& o) const {
    require(m_ == o.m_, "RationalMatrix: size mismatch");
    RationalMatrix r(m_);
    for (size_t k = 0; k < e_.size(); ++k) r.e_[k] = e_[k] + o.e_[k];
    return r;
  }

  RationalMatrix operator-(const RationalMatrix& o) const {
    require(m_ == o.m_, "RationalMatrix: size mismatch");
    RationalMatrix r(m_);
    for (size_t k = 0; k < e_.size(); ++k) r.e_[k] = e_[k] - o.e_[k];
    return r;
  }

  friend RationalMatrix operator*(double k, const RationalMatrix& a) {
    RationalMatrix r(a.m_);
    for (size_t i = 0; i < a.e_.size(); ++i) r.e_[i] = k * a.e_[i];
    return r;
  }

  RationalMatrix operator-() const { return -1.0 * *this; }

  RationalMatrix operator*(const RationalMatrix& o) const {
    require(m_ == o.m_, "RationalMatrix: size mismatch");
    RationalMatrix r(m_);
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < m_; ++j) {
        Rational acc;
        for (int k = 0; k < m_; ++k) acc = acc + at(i, k) * o.at(k, j);
        r.at(i, j) = acc;
      }
    }
    return r;
  }

  Rational determinant() const {
    return det_recurse(*this);
  }

  // Adjugate / determinant. Throws when the determinant is identically zero,
  // i.e. the function is singular everywhere, not just at sample points.
  RationalMatrix inverse() const {
    Rational det = determinant();
    require(!det.is_zero(),
            "RationalMatrix::inverse: identically singular function");
    Rational inv_det = det.reciprocal();
    RationalMatrix r(m_);
    if (m_ == 1) {
      r.at(0, 0) = inv_det;
      return r;
    }
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < m_; ++j) {
        Rational c = cofactor(j, i);  // adjugate transposes
        r.at(i, j) = c * inv_det;
      }
    }
    return r;
  }

  int max_degree() const {
    int d = 0;
    for (const Rational& r : e_) d = std::max(d, r.max_degree());
    return d;
  }

 private:
  static Rational det_recurse(const RationalMatrix& a) {
    int m = a.m_;
    if (m == 1) return a.at(0, 0);
    if (m == 2) {
      return a.at(0, 0) * a.at(1, 1) - a.at(0, 1) * a.at(1, 0);
    }
    Rational acc;
    for (int j = 0; j < m; ++j) {
      if (a.at(0, j).is_zero()) continue;
      Rational term = a.at(0, j) * det_recurse(a.minor_matrix(0, j));
      acc = (j % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
  }

  Rational cofactor(int i, int j) const {
    Rational d = det_recurse(minor_matrix(i, j));
    return ((i + j) % 2 == 0) ? d : -d;
  }

  RationalMatrix minor_matrix(int drop_i, int drop_j) const {
    RationalMatrix r(m_ - 1);
    int ri = 0;
    for (int i = 0; i < m_; ++i) {
      if (i == drop_i) continue;
      int rj = 0;
      for (int j = 0; j < m_; ++j) {
        if (j == drop_j) continue;
        r.at(ri, rj) = at(i, j);
        ++rj;
      }
      ++ri;
    }
    return r;
  }

  int m_;
  std::vector<Rational> e_;
};

inline bool rational_matrix_approx_equal(const RationalMatrix& a,
                                         const RationalMatrix& b,
                                         double tol = 1e-9) {
  if (a.size() != b.size()) return false;
  for (int i = 0; i < a.size(); ++i) {
    for (int j = 0; j < a.size(); ++j) {
      if (!rational_approx_equal(a.at(i, j), b.at(i, j), tol)) return false;
    }
  }
  return true;
}

// 2x2 block assembly of equally sized square blocks.
inline RationalMatrix rational_block_2x2(const RationalMatrix& a,
                                         const RationalMatrix& b,
                                         const RationalMatrix& c,
                                         const RationalMatrix& d) {
  int m = a.size();
  require(b.size() == m && c.size() == m && d.size() == m,
          "rational_block_2x2: block size mismatch");
  RationalMatrix out(2 * m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      out.at(i, j) = a.at(i, j);
      out.at(i, j + m) = b.at(i, j);
      out.at(i + m, j) = c.at(i, j);
      out.at(i + m, j + m) = d.at(i, j);
    }
  }
  return out;
}

// Named operation aliases used by the expression layer and the CLI.
inline RationalMatrix rf_add(const RationalMatrix& f, const RationalMatrix& g) {
  return f + g;
}
inline RationalMatrix rf_scale(double c, const RationalMatrix& f) {
  return c * f;
}
inline RationalMatrix rf_invert(const RationalMatrix& f) { return f.inverse(); }

// Pointwise evaluation with an explicit pole marker: the marker is set when
// some entry's denominator vanishes at s relative to its cancellation-free
// magnitude bound.
struct RfValue {
  bool pole = false;
  Matrix value;
  double min_den_headroom = 1.0;
};

inline RfValue rf_eval(const RationalMatrix& f, Complex s,
                       double tol = kDefaultTol) {
  RationalMatrix::Eval e = f(s);
  RfValue v;
  v.value = std::move(e.value);
  v.min_den_headroom = e.min_den_headroom;
  v.pole = e.min_den_headroom <= tol;
  return v;
}

// (X^-1 + Y)^-1: the parallel-composition primitive. Defined whenever X is
// invertible and X^-1 + Y is invertible as a rational function.
inline RationalMatrix phi(const RationalMatrix& x, const RationalMatrix& y) {
  require(x.size() == y.size(), "phi: size mismatch");
  return (x.inverse() + y).inverse();
}

// Matrix-argument variant at a fixed point.
inline Matrix phi(const Matrix& x, const Matrix& y, double tol = kDefaultTol) {
  require_square(x, "phi");
  require(x.rows() == y.rows() && x.cols() == y.cols(), "phi: size mismatch");
  require(!smallest_singular_value(x, tol).singular, "phi: X singular");
  Matrix xinv = x.inverse();
  Matrix sum = xinv + y;
  require(!smallest_singular_value(sum, tol).singular,
          "phi: X^-1 + Y singular");
  return sum.inverse();
}

}  // namespace mcic
