#pragma once

// Gramian balancing and the sign-iteration on the certificate matrix.
//
// For a Hurwitz realization the controllability Gramian W solves
// AW + WA* = -BB* and the observability Gramian M solves A*M + MA = -C*C.
// The square-root method produces a similarity T with both transformed
// Gramians equal to the same diagonal matrix of Hankel singular values.
// In the sign convention used by the certificate machinery, H = -W turns the
// defining equations into HA* + AH = BB* and HA + A*H = C*C.
//
// sign_iteration drives a Hermitian negative-definite H to -I through
//   H_{j+1} = a_j H_j + (1 - a_j) H_j^{-1},
//   a_j = 1 / (1 + max(||H_j||_2, ||H_j^{-1}||_2)) <= 1/2,
// carrying the Gram products WB = BB* and WC = C*C along via
//   WB' = a WB + (1 - a) H^{-1} WC H^{-1},
//   WC' = a WC + (1 - a) H^{-1} WB H^{-1},
// which preserves H'A* + AH' = WB' and H'A + A*H' = WC' whenever the
// incoming pair satisfied those relations. The extreme eigenvalue class of
// H maps exactly onto -1 each step, so exact arithmetic terminates in at
// most n steps; numerically we stop when ||H + I||_2 <= tol.

#include <vector>

#include "mcic/matcore.hpp"
#include "mcic/realization.hpp"

namespace mcic {

namespace detail {

// Solve A X + X A* = -Q by vectorization: (I (x) A + conj(A) (x) I) vec X
// = vec(-Q). Exact for any A whose Lyapunov operator is invertible; cost
// O(n^6), intended for small n.
inline Matrix lyapunov_solve_kron(const Matrix& a, const Matrix& q) {
  const Eigen::Index n = a.rows();
  Matrix op = Matrix::Zero(n * n, n * n);
  // vec(AX) = (I (x) A) vec X, vec(XA*) = (conj(A) (x) I) vec X
  // (column-major vectorization).
  for (Eigen::Index j = 0; j < n; ++j) {
    op.block(j * n, j * n, n, n) += a;
  }
  for (Eigen::Index rb = 0; rb < n; ++rb) {
    for (Eigen::Index cb = 0; cb < n; ++cb) {
      Complex w = std::conj(a(rb, cb));
      for (Eigen::Index i = 0; i < n; ++i) {
        op(rb * n + i, cb * n + i) += w;
      }
    }
  }
  Vector rhs(n * n);
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::Index r = 0; r < n; ++r) rhs(c * n + r) = -q(r, c);
  Vector x = op.partialPivLu().solve(rhs);
  Matrix out(n, n);
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::Index r = 0; r < n; ++r) out(r, c) = x(c * n + r);
  return out;
}

// Same equation through the eigendecomposition of A: with A = V L V^{-1},
// X = V Y V* where Y_ij = -(V^{-1} Q V^{-*})_ij / (l_i + conj(l_j)).
inline Matrix lyapunov_solve_eigen(const Matrix& a, const Matrix& q) {
  Eigendecomposition ed = eigen_decompose(a);
  Matrix vinv = ed.vectors.partialPivLu().inverse();
  Matrix y = vinv * q * vinv.adjoint();
  const Eigen::Index n = a.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      Complex denom = ed.values(i) + std::conj(ed.values(j));
      require(std::abs(denom) > 1e-14,
              "lyapunov_solve: spectrum not Lyapunov-regular");
      y(i, j) = -y(i, j) / denom;
    }
  }
  return ed.vectors * y * ed.vectors.adjoint();
}

}  // namespace detail

// Solve A X + X A* = -Q. Kronecker vectorization up to n = 30, the
// eigendecomposition route beyond.
inline Matrix lyapunov_solve(const Matrix& a, const Matrix& q) {
  require_square(a, "lyapunov_solve");
  require(q.rows() == a.rows() && q.cols() == a.cols(),
          "lyapunov_solve: Q must match A");
  require_finite(a, "lyapunov_solve");
  require_finite(q, "lyapunov_solve");
  if (a.rows() == 0) return Matrix::Zero(0, 0);
  if (a.rows() <= 30) return detail::lyapunov_solve_kron(a, q);
  return detail::lyapunov_solve_eigen(a, q);
}

inline bool is_hurwitz(const Matrix& a, double tol = kDefaultTol) {
  if (a.rows() == 0) return true;
  Eigendecomposition ed = eigen_decompose(a);
  double scale = std::max(1.0, spectral_norm(a));
  for (Eigen::Index i = 0; i < ed.values.size(); ++i) {
    if (ed.values(i).real() >= -tol * scale) return false;
  }
  return true;
}

struct BalancingResult {
  Matrix transform;          // T, n x n invertible
  Matrix transform_inverse;  // T^{-1}
  Realization balanced;      // (T^{-1} A T, T^{-1} B, C T, D)
  Matrix gramian;            // common diagonal Gramian Sigma
  RealVector hankel;         // Hankel singular values, descending
  std::vector<Matrix> iterations;  // H_j trace when the sign-iteration ran
};

// Square-root balancing: with W = Lc Lc* and M = Lo Lo* (Cholesky factors)
// and the singular value decomposition Lo* Lc = U Sigma V*, the transform
// T = Lc V Sigma^{-1/2} (with inverse Sigma^{-1/2} U* Lo*) takes both
// Gramians to Sigma.
inline BalancingResult gramian_balance(const Realization& r,
                                       double tol = kDefaultTol) {
  r.validate();
  require(r.n >= 1, "gramian_balance: need at least one state");
  require(is_hurwitz(r.A, tol), "gramian_balance: A must be Hurwitz");
  Matrix w = lyapunov_solve(r.A, (r.B * r.B.adjoint()).eval());
  Matrix m_gram =
      lyapunov_solve(r.A.adjoint().eval(), (r.C.adjoint() * r.C).eval());
  w = hermitian_part_exact(w);
  m_gram = hermitian_part_exact(m_gram);
  require(is_pd(definiteness(w, tol)),
          "gramian_balance: controllability Gramian numerically singular");
  require(is_pd(definiteness(m_gram, tol)),
          "gramian_balance: observability Gramian numerically singular");

  Eigen::LLT<Matrix> llt_w(w);
  require(llt_w.info() == Eigen::Success,
          "gramian_balance: controllability Gramian factorization failed");
  Eigen::LLT<Matrix> llt_m(m_gram);
  require(llt_m.info() == Eigen::Success,
          "gramian_balance: observability Gramian factorization failed");
  Matrix lc = llt_w.matrixL();
  Matrix lo = llt_m.matrixL();

  Eigen::JacobiSVD<Matrix> svd(lo.adjoint() * lc,
                               Eigen::ComputeFullU | Eigen::ComputeFullV);
  RealVector sigma = svd.singularValues();
  require(sigma(sigma.size() - 1) >
              zero_threshold(sigma(0), tol),
          "gramian_balance: Hankel spectrum numerically singular");
  RealVector sigma_inv_sqrt(sigma.size());
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    sigma_inv_sqrt(i) = 1.0 / std::sqrt(sigma(i));
  }

  BalancingResult out;
  out.transform = lc * svd.matrixV() * sigma_inv_sqrt.asDiagonal();
  out.transform_inverse =
      sigma_inv_sqrt.asDiagonal() * svd.matrixU().adjoint() * lo.adjoint();
  out.hankel = sigma;
  out.gramian = Matrix(sigma.asDiagonal());
  out.balanced.n = r.n;
  out.balanced.m = r.m;
  out.balanced.A = out.transform_inverse * r.A * out.transform;
  out.balanced.B = out.transform_inverse * r.B;
  out.balanced.C = r.C * out.transform;
  out.balanced.D = r.D;
  return out;
}

struct SignIterationStep {
  double alpha = 0.0;     // mixing weight used to leave this iterate
  double distance = 0.0;  // ||H_j + I||_2 at this iterate
};

struct SignIterationResult {
  std::vector<SignIterationStep> trace;  // one entry per visited iterate
  std::vector<Matrix> iterates;          // H_0, H_1, ... as visited
  Matrix H;                              // terminal H (close to -I)
  Matrix WB;                             // terminal BB* product
  Matrix WC;                             // terminal C*C product
  int steps = 0;                         // update count applied
  bool converged = false;                // ||H + I||_2 <= tol reached
  bool monotone = true;                  // distances never increased
};

// Iterate H toward -I, carrying the Gram products of the B- and C-factors.
// B is n x m and C is m x n; the products BB* and C*C evolve so that the
// Lyapunov-type relations with any fixed A are preserved step by step.
inline SignIterationResult sign_iteration(Matrix h, const Matrix& b,
                                          const Matrix& c,
                                          double tol = 1e-10,
                                          int max_iter = 500) {
  require_square(h, "sign_iteration");
  const Eigen::Index n = h.rows();
  require(b.rows() == n, "sign_iteration: B must have n rows");
  require(c.cols() == n, "sign_iteration: C must have n columns");
  require(is_hermitian(h, std::sqrt(kDefaultTol)),
          "sign_iteration: H must be Hermitian");
  require(definiteness(h).kind == Definiteness::NegativeDefinite,
          "sign_iteration: H must be negative definite");

  SignIterationResult out;
  out.WB = b * b.adjoint();
  out.WC = c.adjoint() * c;
  Matrix id = Matrix::Identity(n, n);

  for (int j = 0; j <= max_iter; ++j) {
    Matrix h_inv = h.partialPivLu().inverse();
    double alpha =
        1.0 / (1.0 + std::max(spectral_norm(h), spectral_norm(h_inv)));
    double dist = spectral_norm((h + id).eval());
    if (!out.trace.empty() &&
        dist > out.trace.back().distance + 1e-12 * (1.0 + dist)) {
      out.monotone = false;
    }
    out.trace.push_back({alpha, dist});
    out.iterates.push_back(h);
    if (dist <= tol) {
      out.converged = true;
      break;
    }
    if (j == max_iter) break;
    double beta = 1.0 - alpha;
    Matrix wb_next = alpha * out.WB + beta * (h_inv * out.WC * h_inv);
    Matrix wc_next = alpha * out.WC + beta * (h_inv * out.WB * h_inv);
    h = alpha * h + beta * h_inv;
    out.WB = hermitian_part_exact(wb_next);
    out.WC = hermitian_part_exact(wc_next);
    out.steps = j + 1;
  }
  out.H = h;
  return out;
}

}  // namespace mcic
