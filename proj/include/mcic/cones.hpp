#pragma once

// Lyapunov-type matrix cones L_H = {A : HA + A*H positive definite}, their
// closures, maximality witnesses, and matrix convex combinations through
// isometries.

#include <vector>

#include "mcic/matcore.hpp"

namespace mcic {

struct ConeMembership {
  bool in_open = false;    // certificate positive definite
  bool in_closed = false;  // certificate positive semidefinite
  double min_eig = 0.0;
  Matrix certificate;  // HA + A*H, symmetrized
};

inline ConeMembership membership_L_H(const Matrix& a, const Matrix& h,
                                     double tol = kDefaultTol) {
  require_square(a, "membership_L_H");
  require_finite(a, "membership_L_H");
  require(h.rows() == a.rows() && h.cols() == a.cols(),
          "membership_L_H: H must match A");
  require(is_hermitian(h, std::sqrt(tol)), "membership_L_H: H not Hermitian");
  SingularityVerdict hs = smallest_singular_value(h, tol);
  require(!hs.singular, "membership_L_H: H must be non-singular");
  ConeMembership m;
  m.certificate = hermitian_part_exact(h * a + a.adjoint() * h);
  DefinitenessVerdict v = definiteness(m.certificate, tol);
  m.in_open = is_pd(v);
  m.in_closed = is_psd(v);
  m.min_eig = v.min_eig;
  return m;
}

// L_I membership also reports the Cartesian decomposition A = P + iH, the
// matricial right half-plane coordinates.
struct LiMembership {
  ConeMembership membership;
  HermitianSplit split;
};

inline LiMembership membership_L_I(const Matrix& a, double tol = kDefaultTol) {
  LiMembership r;
  r.membership =
      membership_L_H(a, Matrix::Identity(a.rows(), a.cols()), tol);
  r.split = hermitian_split(a);
  return r;
}

// For B strictly outside the closed cone, A = (alpha I + B* - B)/2 with
// alpha = -min eig(B + B*) lies in the open cone while A + B is singular,
// witnessing that L_I admits no larger convex cone of non-singular matrices.
struct MaximalityWitness {
  Matrix A;
  double alpha = 0.0;
  SingularityVerdict sum_singularity;  // of A + B
};

inline MaximalityWitness maximality_witness(const Matrix& b,
                                            double tol = kDefaultTol) {
  require_square(b, "maximality_witness");
  require_finite(b, "maximality_witness");
  Matrix p2 = hermitian_part_exact(b + b.adjoint());
  DefinitenessVerdict v = definiteness(p2, tol);
  require(v.min_eig < -zero_threshold(std::max(std::abs(v.min_eig),
                                               std::abs(v.max_eig)),
                                      tol),
          "maximality_witness: B is inside the closed cone");
  MaximalityWitness w;
  w.alpha = -v.min_eig;
  Eigen::Index n = b.rows();
  w.A = 0.5 * (w.alpha * Matrix::Identity(n, n) + b.adjoint() - b);
  w.sum_singularity = smallest_singular_value((w.A + b).eval(), tol);
  return w;
}

enum class CombineMode {
  Isometry,  // Upsilon* Upsilon = I
  FullRank,  // Upsilon* Upsilon positive definite
};

// Upsilon* diag(A_1, ..., A_k) Upsilon for square blocks A_j of shared size n
// and Upsilon of shape kn x n.
inline Matrix matrix_convex_combine(const std::vector<Matrix>& blocks,
                                    const Matrix& upsilon,
                                    CombineMode mode = CombineMode::Isometry,
                                    double tol = kDefaultTol) {
  require(!blocks.empty(), "matrix_convex_combine: no blocks");
  Eigen::Index n = blocks.front().rows();
  for (const Matrix& b : blocks) {
    require(b.rows() == n && b.cols() == n,
            "matrix_convex_combine: blocks must share a square size");
    require_finite(b, "matrix_convex_combine");
  }
  Eigen::Index k = Eigen::Index(blocks.size());
  require(upsilon.rows() == k * n && upsilon.cols() == n,
          "matrix_convex_combine: Upsilon must be kn x n");
  require_finite(upsilon, "matrix_convex_combine");
  Matrix gram = upsilon.adjoint() * upsilon;
  if (mode == CombineMode::Isometry) {
    double dev = spectral_norm((gram - Matrix::Identity(n, n)).eval());
    require(dev <= zero_threshold(spectral_norm(gram), std::sqrt(tol)),
            "matrix_convex_combine: Upsilon is not an isometry");
  } else {
    require(is_pd(definiteness(gram, tol)),
            "matrix_convex_combine: Upsilon* Upsilon is not positive definite");
  }
  Matrix out = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < k; ++j) {
    Matrix uj = upsilon.middleRows(j * n, n);
    out += uj.adjoint() * blocks[size_t(j)] * uj;
  }
  return out;
}

// Singular convex combination of X = [[-1, t], [0, 1]] with its unitary
// conjugate U*XU. Both roots theta_+- of the determinant are returned with
// the combination matrix evaluated there; det M(theta_+-) = 0 for every t.
struct ThetaCombination {
  double theta_plus = 0.0;
  double theta_minus = 0.0;
  Matrix M_plus;
  Matrix M_minus;
  Matrix U;
};

namespace detail {
inline Matrix theta_matrix(double theta, Complex t) {
  Matrix m(2, 2);
  m(0, 0) = 2.0 * theta - 1.0;
  m(0, 1) = theta * t;
  m(1, 0) = (theta - 1.0) * std::conj(t);
  m(1, 1) = 1.0 - 2.0 * theta;
  return m;
}
}  // namespace detail

inline ThetaCombination singular_theta_combination(Complex t) {
  require(std::isfinite(t.real()) && std::isfinite(t.imag()),
          "singular_theta_combination: non-finite t");
  ThetaCombination r;
  double at = std::abs(t);
  double half_width = at / (2.0 * std::sqrt(at * at + 4.0));
  r.theta_plus = 0.5 + half_width;
  r.theta_minus = 0.5 - half_width;
  r.M_plus = detail::theta_matrix(r.theta_plus, t);
  r.M_minus = detail::theta_matrix(r.theta_minus, t);
  r.U = Matrix(2, 2);
  if (at == 0.0) {
    r.U << 0, 1, -1, 0;
  } else {
    r.U << Complex(0), Complex(1), -std::conj(t) / t, Complex(0);
  }
  return r;
}

// Structured isometry interleaving state blocks (size n) and signal blocks
// (size m): the assembled matrix stacks diag(v_{j,n}, v_{j,m}) and its Gram
// matrix must be I_{n+m} (isometry) or positive definite (full rank).
struct StructuredIsometry {
  std::vector<Matrix> blocks_n;
  std::vector<Matrix> blocks_m;
  Matrix assembled;  // k(n+m) x (n+m)
};

inline StructuredIsometry structured_isometry(
    const std::vector<Matrix>& blocks_n, const std::vector<Matrix>& blocks_m,
    CombineMode mode = CombineMode::Isometry, double tol = kDefaultTol) {
  require(!blocks_n.empty() && blocks_n.size() == blocks_m.size(),
          "structured_isometry: need matching non-empty block lists");
  Eigen::Index n = blocks_n.front().rows();
  Eigen::Index m = blocks_m.front().rows();
  for (const Matrix& b : blocks_n) {
    require(b.rows() == n && b.cols() == n,
            "structured_isometry: state blocks must be n x n");
    require_finite(b, "structured_isometry");
  }
  for (const Matrix& b : blocks_m) {
    require(b.rows() == m && b.cols() == m,
            "structured_isometry: signal blocks must be m x m");
    require_finite(b, "structured_isometry");
  }
  Eigen::Index k = Eigen::Index(blocks_n.size());
  StructuredIsometry s;
  s.blocks_n = blocks_n;
  s.blocks_m = blocks_m;
  s.assembled = Matrix::Zero(k * (n + m), n + m);
  for (Eigen::Index j = 0; j < k; ++j) {
    s.assembled.block(j * (n + m), 0, n, n) = blocks_n[size_t(j)];
    s.assembled.block(j * (n + m) + n, n, m, m) = blocks_m[size_t(j)];
  }
  Matrix gram = s.assembled.adjoint() * s.assembled;
  if (mode == CombineMode::Isometry) {
    double dev =
        spectral_norm((gram - Matrix::Identity(n + m, n + m)).eval());
    require(dev <= zero_threshold(spectral_norm(gram), std::sqrt(tol)),
            "structured_isometry: blocks do not assemble to an isometry");
  } else {
    require(is_pd(definiteness(gram, tol)),
            "structured_isometry: assembled Gram matrix not positive definite");
  }
  return s;
}

// sum_j diag(v_{j,n}, v_{j,m})* R_j diag(v_{j,n}, v_{j,m}) for (n+m)-square
// R_j. Preserves the n/m block structure of system matrices.
inline Matrix nm_matrix_convex_combine(const std::vector<Matrix>& r_blocks,
                                       const StructuredIsometry& iso) {
  require(!r_blocks.empty() && r_blocks.size() == iso.blocks_n.size(),
          "nm_matrix_convex_combine: need one R per isometry block");
  Eigen::Index n = iso.blocks_n.front().rows();
  Eigen::Index m = iso.blocks_m.front().rows();
  Matrix out = Matrix::Zero(n + m, n + m);
  for (size_t j = 0; j < r_blocks.size(); ++j) {
    const Matrix& r = r_blocks[j];
    require(r.rows() == n + m && r.cols() == n + m,
            "nm_matrix_convex_combine: R blocks must be (n+m)-square");
    require_finite(r, "nm_matrix_convex_combine");
    Matrix d = Matrix::Zero(n + m, n + m);
    d.topLeftCorner(n, n) = iso.blocks_n[j];
    d.bottomRightCorner(m, m) = iso.blocks_m[j];
    out += d.adjoint() * r * d;
  }
  return out;
}

struct BallMembership {
  bool inside = false;
  double norm = 0.0;
};

// Membership in the spectral-norm ball of radius alpha, a matrix convex set
// that is not an invertible cone.
inline BallMembership spectral_norm_ball_membership(const Matrix& a,
                                                    double alpha,
                                                    double tol = kDefaultTol) {
  require_finite(a, "spectral_norm_ball_membership");
  require(std::isfinite(alpha) && alpha >= 0.0,
          "spectral_norm_ball_membership: radius must be non-negative");
  BallMembership b;
  b.norm = spectral_norm(a);
  b.inside = b.norm <= alpha + zero_threshold(alpha, tol);
  return b;
}

}  // namespace mcic
