#pragma once

// Quadratic positive-reality certificates for realization arrays: the
// residual Q(H) = diag(-H, I) R + R* diag(-H, I) is positive semidefinite
// for some H > 0 exactly when the transfer function is positive real (the
// converse needing minimality). kyp_verify classifies a candidate H;
// kyp_search looks for one by alternating projections between the
// positive-semidefinite cone and the affine set {Q(H) : H Hermitian}.

#include <vector>

#include "mcic/matcore.hpp"
#include "mcic/realization.hpp"

namespace mcic {

struct KypCertificate {
  Matrix H;                    // n x n Hermitian
  Matrix Q;                    // (n+m)-square residual
  DefinitenessVerdict verdict; // classification of Q
  bool valid = false;          // Q psd and H pd
};

// Q(H) = diag(-H, I_m) R + R* diag(-H, I_m)
//      = [ -HA - A*H   -HB + C* ]
//        [  C - B*H     D + D*  ].
inline Matrix kyp_form(const Realization& r, const Matrix& h) {
  r.validate();
  require(h.rows() == r.n && h.cols() == r.n, "kyp_form: H must be n x n");
  require_finite(h, "kyp_form");
  Matrix g = Matrix::Zero(r.n + r.m, r.n + r.m);
  g.topLeftCorner(r.n, r.n) = -h;
  g.bottomRightCorner(r.m, r.m) = Matrix::Identity(r.m, r.m);
  Matrix view = r.as_matrix();
  return g * view + view.adjoint() * g;
}

inline KypCertificate kyp_verify(const Realization& r, const Matrix& h,
                                 double tol = kDefaultTol) {
  require(h.rows() == r.n && h.cols() == r.n, "kyp_verify: H must be n x n");
  if (r.n > 0) {
    require(is_hermitian(h, std::sqrt(tol)), "kyp_verify: H must be Hermitian");
    require(is_pd(definiteness(h, tol)),
            "kyp_verify: H must be positive definite");
  }
  KypCertificate cert;
  cert.H = h;
  cert.Q = kyp_form(r, h);
  cert.verdict = definiteness(cert.Q, tol);
  cert.valid = is_psd(cert.verdict);
  return cert;
}

enum class KypSearchStatus {
  Found,          // valid certificate located
  Infeasible,     // residual stalled without reaching the psd cone
  MaxIterations,  // iteration budget exhausted before a decision
};

inline const char* to_string(KypSearchStatus s) {
  switch (s) {
    case KypSearchStatus::Found: return "found";
    case KypSearchStatus::Infeasible: return "infeasible";
    case KypSearchStatus::MaxIterations: return "max-iterations";
  }
  return "unknown";
}

struct KypSearchResult {
  KypSearchStatus status = KypSearchStatus::Infeasible;
  KypCertificate certificate;  // best H seen (valid when status == Found)
  int iterations = 0;
  double final_residual = 0.0;  // relative negative part of Q at exit
};

namespace detail {

// Orthonormal (Frobenius) basis of n x n Hermitian matrices, n^2 elements:
// diagonal units, symmetric pairs (e_ij + e_ji)/sqrt(2), antisymmetric pairs
// i(e_ij - e_ji)/sqrt(2).
inline std::vector<Matrix> hermitian_basis(int n) {
  std::vector<Matrix> basis;
  basis.reserve(size_t(n) * size_t(n));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < n; ++i) {
    Matrix e = Matrix::Zero(n, n);
    e(i, i) = 1.0;
    basis.push_back(e);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Matrix s = Matrix::Zero(n, n);
      s(i, j) = inv_sqrt2;
      s(j, i) = inv_sqrt2;
      basis.push_back(s);
      Matrix a = Matrix::Zero(n, n);
      a(i, j) = Complex(0.0, inv_sqrt2);
      a(j, i) = Complex(0.0, -inv_sqrt2);
      basis.push_back(a);
    }
  }
  return basis;
}

// Real column vectorization [Re vec(M); Im vec(M)] so complex Frobenius
// least squares becomes a real one.
inline Eigen::VectorXd vec_real(const Matrix& m) {
  Eigen::VectorXd v(2 * m.size());
  Eigen::Index idx = 0;
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      v(idx) = m(r, c).real();
      v(idx + m.size()) = m(r, c).imag();
      ++idx;
    }
  }
  return v;
}

// Clip a Hermitian matrix to the cone {X >= floor * I} by eigenvalue
// flooring.
inline Matrix eigen_floor(const Matrix& x, double floor_value) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part_exact(x));
  RealVector ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < floor_value) ev(i) = floor_value;
  }
  return es.eigenvectors() * ev.asDiagonal() *
         es.eigenvectors().adjoint();
}

// Relative size of the negative part of a Hermitian matrix: 0 when psd.
inline double negative_part_ratio(const Matrix& q, double) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part_exact(q),
                                           Eigen::EigenvaluesOnly);
  RealVector ev = es.eigenvalues();
  if (ev.size() == 0) return 0.0;
  double min_eig = ev(0);
  double scale = std::max({1.0, std::abs(ev(0)), std::abs(ev(ev.size() - 1))});
  return min_eig < 0.0 ? -min_eig / scale : 0.0;
}

}  // namespace detail

// Alternating-projection search for H > 0 with Q(H) >= 0. Starts from
// H = I; each round projects the current residual onto the psd cone by
// eigenvalue clipping, solves the Hermitian least-squares problem for the H
// whose residual is closest to that projection, then floors the spectrum of
// H at delta = tol to stay positive definite. Outcomes are data: a stalled
// residual (relative decrease below tol across a 25-round window) reports
// infeasibility, an exhausted budget reports max-iterations.
inline KypSearchResult kyp_search(const Realization& r, int max_iter = 500,
                                  double tol = kDefaultTol) {
  r.validate();
  KypSearchResult out;
  if (r.n == 0) {
    KypCertificate cert;
    cert.H = Matrix::Zero(0, 0);
    cert.Q = kyp_form(r, cert.H);
    cert.verdict = definiteness(cert.Q, tol);
    cert.valid = is_psd(cert.verdict);
    out.certificate = cert;
    out.status = cert.valid ? KypSearchStatus::Found : KypSearchStatus::Infeasible;
    out.final_residual = detail::negative_part_ratio(cert.Q, tol);
    return out;
  }

  const int n = r.n;
  const int m = r.m;
  const std::vector<Matrix> basis = detail::hermitian_basis(n);

  // Fixed part of Q (independent of H) and the linear map K: H -> Q(H) - S.
  Matrix s_fixed = Matrix::Zero(n + m, n + m);
  s_fixed.topRightCorner(n, m) = r.C.adjoint();
  s_fixed.bottomLeftCorner(m, n) = r.C;
  s_fixed.bottomRightCorner(m, m) = r.D + r.D.adjoint();

  auto k_of = [&](const Matrix& h) {
    Matrix k = Matrix::Zero(n + m, n + m);
    k.topLeftCorner(n, n) = -(h * r.A + r.A.adjoint() * h);
    k.topRightCorner(n, m) = -(h * r.B);
    k.bottomLeftCorner(m, n) = -(r.B.adjoint() * h);
    return k;
  };

  // Precompute the least-squares matrix: columns are vec_real(K(E_k)).
  const Eigen::Index rows = 2 * Eigen::Index(n + m) * Eigen::Index(n + m);
  Eigen::MatrixXd ls(rows, Eigen::Index(basis.size()));
  for (size_t k = 0; k < basis.size(); ++k) {
    ls.col(Eigen::Index(k)) = detail::vec_real(k_of(basis[k]));
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(ls);

  Matrix h = Matrix::Identity(n, n);
  std::vector<double> residuals;
  residuals.reserve(size_t(max_iter) + 1);
  const int stall_window = 25;

  for (int iter = 0; iter < max_iter; ++iter) {
    out.iterations = iter + 1;
    Matrix q = kyp_form(r, h);
    double res = detail::negative_part_ratio(q, tol);
    residuals.push_back(res);

    KypCertificate cert;
    cert.H = h;
    cert.Q = q;
    cert.verdict = definiteness(q, tol);
    cert.valid = is_psd(cert.verdict) && is_pd(definiteness(h, tol));
    out.certificate = cert;
    out.final_residual = res;
    if (cert.valid) {
      out.status = KypSearchStatus::Found;
      return out;
    }

    if (int(residuals.size()) > stall_window) {
      double before = residuals[residuals.size() - 1 - size_t(stall_window)];
      double now = residuals.back();
      if (before - now < tol * std::max(before, 1e-300)) {
        out.status = KypSearchStatus::Infeasible;
        return out;
      }
    }

    // (a) project residual onto the psd cone.
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part_exact(q));
    RealVector ev = es.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      if (ev(i) < 0.0) ev(i) = 0.0;
    }
    Matrix q_proj =
        es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();

    // (b) Hermitian least squares: minimize ||K(H) - (q_proj - S)||_F.
    Eigen::VectorXd target = detail::vec_real((q_proj - s_fixed).eval());
    Eigen::VectorXd coeffs = qr.solve(target);
    Matrix h_next = Matrix::Zero(n, n);
    for (size_t k = 0; k < basis.size(); ++k) {
      h_next += coeffs(Eigen::Index(k)) * basis[k];
    }

    // (c) keep H safely positive definite.
    h = detail::eigen_floor(hermitian_part_exact(h_next), tol);
  }

  out.status = KypSearchStatus::MaxIterations;
  return out;
}

}  // namespace mcic
