#pragma once

// State-space realization arrays R = [A B; C D] with their dual face: the
// four-block form drives transfer-function evaluation C(sI-A)^{-1}B + D,
// while the assembled (n+m)-square matrix view supports cone arithmetic
// (positive scaling, sums, inversion) and congruence-style coordinate
// changes. Conversion to an exact rational matrix goes through the
// Faddeev-LeVerrier adjugate recurrence.

#include <utility>
#include <vector>

#include "mcic/cones.hpp"
#include "mcic/matcore.hpp"
#include "mcic/polynomial.hpp"
#include "mcic/rational.hpp"

namespace mcic {

struct Realization {
  int n = 0;  // state dimension
  int m = 0;  // input/output dimension
  Matrix A;   // n x n
  Matrix B;   // n x m
  Matrix C;   // m x n
  Matrix D;   // m x m

  Realization() = default;
  Realization(Matrix a, Matrix b, Matrix c, Matrix d)
      : A(std::move(a)), B(std::move(b)), C(std::move(c)), D(std::move(d)) {
    n = int(A.rows());
    m = int(D.rows());
    validate();
  }

  void validate() const {
    require(n >= 0 && m >= 1, "Realization: need m >= 1 and n >= 0");
    require(A.rows() == n && A.cols() == n, "Realization: A must be n x n");
    require(B.rows() == n && B.cols() == m, "Realization: B must be n x m");
    require(C.rows() == m && C.cols() == n, "Realization: C must be m x n");
    require(D.rows() == m && D.cols() == m, "Realization: D must be m x m");
    require_finite(A, "Realization A");
    require_finite(B, "Realization B");
    require_finite(C, "Realization C");
    require_finite(D, "Realization D");
  }

  // Assembled (n+m)-square matrix view [A B; C D].
  Matrix as_matrix() const {
    Matrix r(n + m, n + m);
    r.topLeftCorner(n, n) = A;
    r.topRightCorner(n, m) = B;
    r.bottomLeftCorner(m, n) = C;
    r.bottomRightCorner(m, m) = D;
    return r;
  }

  static Realization from_matrix(const Matrix& view, int n, int m) {
    require(n >= 0 && m >= 1, "Realization: need m >= 1 and n >= 0");
    require(view.rows() == n + m && view.cols() == n + m,
            "Realization: view must be (n+m)-square");
    Realization r;
    r.n = n;
    r.m = m;
    r.A = view.topLeftCorner(n, n);
    r.B = view.topRightCorner(n, m);
    r.C = view.bottomLeftCorner(m, n);
    r.D = view.bottomRightCorner(m, m);
    r.validate();
    return r;
  }

  bool is_real(double tol = kDefaultTol) const {
    double scale = std::max({spectral_norm(A), spectral_norm(B),
                             spectral_norm(C), spectral_norm(D), 1.0});
    double imag_max = 0.0;
    for (const Matrix* x : {&A, &B, &C, &D}) {
      if (x->size() > 0) {
        imag_max = std::max(imag_max, x->imag().cwiseAbs().maxCoeff());
      }
    }
    return imag_max <= zero_threshold(scale, tol);
  }
};

// Canonical generator realizations (m = 1): f(s) = 1/s and g(s) = 1.
inline Realization realization_f() {
  return Realization(Matrix::Zero(1, 1), Matrix::Ones(1, 1),
                     Matrix::Ones(1, 1), Matrix::Zero(1, 1));
}

inline Realization realization_g() {
  return Realization(Matrix::Zero(1, 1), Matrix::Zero(1, 1),
                     Matrix::Zero(1, 1), Matrix::Ones(1, 1));
}

// h(s) = b/(s+a) + d as a 1-state array [[-a, sqrt(b)], [sqrt(b), d]].
inline Realization realization_h(double a, double b, double d) {
  require(b >= 0.0, "realization_h: b must be non-negative for this form");
  Matrix A(1, 1), B(1, 1), C(1, 1), D(1, 1);
  A(0, 0) = -a;
  B(0, 0) = std::sqrt(b);
  C(0, 0) = std::sqrt(b);
  D(0, 0) = d;
  return Realization(A, B, C, D);
}

struct TransferValue {
  bool pole = false;      // s is (numerically) an eigenvalue of A
  Matrix value;           // C(sI-A)^{-1}B + D when not at a pole
  double sigma_min = 0.0; // smallest singular value of sI-A (scaled context)
};

// F(s) = C(sI-A)^{-1}B + D. When sI-A is numerically singular the result is
// flagged as a pole and the value is not meaningful.
inline TransferValue transfer_eval(const Realization& r, Complex s,
                                   double tol = kDefaultTol) {
  r.validate();
  TransferValue out;
  if (r.n == 0) {
    out.value = r.D;
    out.sigma_min = std::numeric_limits<double>::infinity();
    return out;
  }
  Matrix shifted = s * Matrix::Identity(r.n, r.n) - r.A;
  Eigen::JacobiSVD<Matrix> svd(shifted);
  const RealVector& sv = svd.singularValues();
  out.sigma_min = sv(sv.size() - 1);
  double smax = sv(0);
  if (out.sigma_min <= zero_threshold(smax, tol)) {
    out.pole = true;
    out.value = Matrix::Zero(r.m, r.m);
    return out;
  }
  out.value = r.C * shifted.partialPivLu().solve(r.B) + r.D;
  return out;
}

// Positive scaling of the assembled matrix view.
inline Realization realization_scale(double c, const Realization& r) {
  require(c > 0.0, "realization_scale: scale must be positive");
  return Realization::from_matrix((c * r.as_matrix()).eval(), r.n, r.m);
}

inline Realization realization_sum(const Realization& r1,
                                   const Realization& r2) {
  require(r1.n == r2.n && r1.m == r2.m,
          "realization_sum: operands must share (n, m)");
  return Realization::from_matrix((r1.as_matrix() + r2.as_matrix()).eval(),
                                  r1.n, r1.m);
}

// Inverse of the assembled matrix view, reinterpreted with the same split.
inline Realization realization_invert(const Realization& r,
                                      double tol = kDefaultTol) {
  Matrix view = r.as_matrix();
  SingularityVerdict sv = smallest_singular_value(view, tol);
  require(!sv.singular, "realization_invert: matrix view is singular");
  return Realization::from_matrix(view.partialPivLu().inverse().eval(), r.n,
                                  r.m);
}

enum class RealizationOp {
  Scale,
  Sum,
  Invert,
};

// Dispatcher over the three cone operations on matrix views. Scale expects
// one operand (and c > 0), invert one operand, sum at least two.
inline Realization realization_matrix_op(const std::vector<Realization>& rs,
                                         RealizationOp op, double c = 1.0,
                                         double tol = kDefaultTol) {
  require(!rs.empty(), "realization_matrix_op: no operands");
  for (const Realization& r : rs) {
    require(r.n == rs.front().n && r.m == rs.front().m,
            "realization_matrix_op: operands must share (n, m)");
  }
  switch (op) {
    case RealizationOp::Scale:
      require(rs.size() == 1, "realization_matrix_op: scale takes one operand");
      return realization_scale(c, rs.front());
    case RealizationOp::Sum: {
      require(rs.size() >= 2,
              "realization_matrix_op: sum takes at least two operands");
      Realization acc = rs.front();
      for (size_t i = 1; i < rs.size(); ++i) acc = realization_sum(acc, rs[i]);
      return acc;
    }
    case RealizationOp::Invert:
      require(rs.size() == 1,
              "realization_matrix_op: invert takes one operand");
      return realization_invert(rs.front(), tol);
  }
  throw Error("realization_matrix_op: unknown operation");
}

// R-hat = diag(H^{1/2}, I) R diag(H^{-1/2}, I). Leaves the transfer function
// unchanged (it is a state-space similarity) and transports quadratic
// certificates by congruence.
inline Realization coordinate_change(const Realization& r, const Matrix& h,
                                     double tol = kDefaultTol) {
  r.validate();
  require(h.rows() == r.n && h.cols() == r.n,
          "coordinate_change: H must be n x n");
  if (r.n == 0) return r;
  require(is_pd(definiteness(h, tol)),
          "coordinate_change: H must be positive definite");
  Matrix root = hermitian_sqrt(h, tol);
  Matrix root_inv = root.partialPivLu().inverse();
  Realization out;
  out.n = r.n;
  out.m = r.m;
  out.A = root * r.A * root_inv;
  out.B = root * r.B;
  out.C = r.C * root_inv;
  out.D = r.D;
  return out;
}

// Structured congruence-sum on matrix views; preserves the n/m split.
inline Realization nm_realization_combine(const std::vector<Realization>& rs,
                                          const StructuredIsometry& iso) {
  require(!rs.empty(), "nm_realization_combine: no operands");
  int n = rs.front().n;
  int m = rs.front().m;
  std::vector<Matrix> views;
  views.reserve(rs.size());
  for (const Realization& r : rs) {
    require(r.n == n && r.m == m,
            "nm_realization_combine: operands must share (n, m)");
    views.push_back(r.as_matrix());
  }
  return Realization::from_matrix(nm_matrix_convex_combine(views, iso), n, m);
}

namespace detail {

// Faddeev-LeVerrier: characteristic polynomial coefficients and the
// polynomial adjugate of (sI - A) for real A. Returns the monic
// characteristic polynomial p (ascending coefficients) and the matrices
// N_0..N_{n-1} with adj(sI - A) = sum_k N_k s^k.
struct AdjugateExpansion {
  Polynomial charpoly;
  std::vector<Eigen::MatrixXd> adj_coeffs;  // index = power of s
};

inline AdjugateExpansion faddeev_leverrier(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  AdjugateExpansion out;
  std::vector<double> p(size_t(n) + 1, 0.0);
  p[size_t(n)] = 1.0;
  out.adj_coeffs.assign(size_t(n), Eigen::MatrixXd::Zero(n, n));
  Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    // acc holds N_{n-k} before the update of the characteristic coefficient.
    out.adj_coeffs[size_t(n - k)] = acc;
    Eigen::MatrixXd am = a * acc;
    double ck = -am.trace() / double(k);
    p[size_t(n - k)] = ck;
    acc = am + ck * Eigen::MatrixXd::Identity(n, n);
  }
  out.charpoly = Polynomial(p);
  return out;
}

}  // namespace detail

// Exact rational form of the transfer function of a real realization:
// entry (i, j) is ((C adj(sI-A) B)_{ij} + D_{ij} p(s)) / p(s) with p the
// characteristic polynomial of A. Requires real data so the rational
// coefficients are real.
inline RationalMatrix realization_to_rational(const Realization& r,
                                              double tol = kDefaultTol) {
  r.validate();
  require(r.is_real(tol),
          "realization_to_rational: realization must have real entries");
  const Eigen::MatrixXd a = r.A.real();
  const Eigen::MatrixXd b = r.B.real();
  const Eigen::MatrixXd c = r.C.real();
  const Eigen::MatrixXd d = r.D.real();
  RationalMatrix out(r.m);
  if (r.n == 0) {
    for (int i = 0; i < r.m; ++i)
      for (int j = 0; j < r.m; ++j)
        out.at(i, j) = Rational::constant(d(i, j));
    return out;
  }
  detail::AdjugateExpansion fl = detail::faddeev_leverrier(a);
  for (int i = 0; i < r.m; ++i) {
    for (int j = 0; j < r.m; ++j) {
      // Numerator polynomial: sum_k (C N_k B)_{ij} s^k + D_{ij} p(s).
      std::vector<double> num(size_t(r.n) + 1, 0.0);
      for (int k = 0; k < r.n; ++k) {
        num[size_t(k)] =
            (c.row(i) * fl.adj_coeffs[size_t(k)] * b.col(j)).value();
      }
      Polynomial numerator = Polynomial(num) + d(i, j) * fl.charpoly;
      out.at(i, j) = Rational(numerator, fl.charpoly);
    }
  }
  return out;
}

}  // namespace mcic
