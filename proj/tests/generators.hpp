#pragma once

// Seeded random builders shared by the unit suites and the acceptance
// driver: quadratically certified realization seeds, cone-operation trees
// over the canonical generators, Hurwitz systems, and balanced systems with
// a prescribed Hankel spectrum.

#include <algorithm>
#include <vector>

#include "mcic/balance.hpp"
#include "mcic/kyp.hpp"
#include "mcic/matcore.hpp"
#include "mcic/realization.hpp"

namespace genutil {

inline Eigen::MatrixXd real_gaussian(mcic::Rng& rng, int rows, int cols) {
  Eigen::MatrixXd g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) g(i, j) = rng.normal();
  return g;
}

// A realization that carries a valid H = I certificate by construction:
//   R = [ -P_n        -M + T                  ]
//       [ (M + T)^T    P_m + M^T P_n^{-1} M   ]
// gives residual Q = 2 [P_n, M; M^T, P_m + M^T P_n^{-1} M], which is
// positive semidefinite by the Schur complement (P_n > 0, P_m >= 0).
// All entries real so the transfer function has real coefficients.
inline mcic::Realization random_certified_seed(mcic::Rng& rng, int n, int m) {
  using mcic::Matrix;
  Eigen::MatrixXd g = real_gaussian(rng, n, n);
  Eigen::MatrixXd pn =
      g * g.transpose() + 0.3 * Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd f = real_gaussian(rng, m, m);
  Eigen::MatrixXd pm = f * f.transpose();
  Eigen::MatrixXd mm = real_gaussian(rng, n, m);
  Eigen::MatrixXd t = real_gaussian(rng, n, m);
  Eigen::MatrixXd a = -pn;
  Eigen::MatrixXd b = -mm + t;
  Eigen::MatrixXd c = (mm + t).transpose();
  Eigen::MatrixXd d = pm + mm.transpose() * pn.ldlt().solve(mm);
  return mcic::Realization(a.cast<mcic::Complex>(), b.cast<mcic::Complex>(),
                           c.cast<mcic::Complex>(), d.cast<mcic::Complex>());
}

// Random cone-operation tree over the canonical one-state generators
// (f(s) = 1/s and g(s) = 1). Every node is certified at H = I: the
// generators are, and positive scaling, sums, and inversion of the matrix
// view preserve the certificate. Inverses that would hit a singular view
// fall back to the operand.
inline mcic::Realization random_fg_tree(mcic::Rng& rng, int depth) {
  if (depth <= 0) {
    return rng.uniform() < 0.5 ? mcic::realization_f() : mcic::realization_g();
  }
  double u = rng.uniform();
  if (u < 0.25) {
    return rng.uniform() < 0.5 ? mcic::realization_f() : mcic::realization_g();
  }
  if (u < 0.5) {
    double c = rng.log_uniform(1e-1, 1e1);
    return mcic::realization_scale(c, random_fg_tree(rng, depth - 1));
  }
  if (u < 0.8) {
    return mcic::realization_sum(random_fg_tree(rng, depth - 1),
                                 random_fg_tree(rng, depth - 1));
  }
  mcic::Realization inner = random_fg_tree(rng, depth - 1);
  try {
    return mcic::realization_invert(inner);
  } catch (const mcic::Error&) {
    return inner;
  }
}

// Random system with A Hurwitz by spectral shift; generically controllable
// and observable.
inline mcic::Realization random_hurwitz_system(mcic::Rng& rng, int n, int m) {
  Eigen::MatrixXd g = real_gaussian(rng, n, n);
  double shift = g.jacobiSvd().singularValues()(0) + rng.uniform(0.5, 1.5);
  Eigen::MatrixXd a = g - shift * Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd b = real_gaussian(rng, n, m);
  Eigen::MatrixXd c = real_gaussian(rng, m, n);
  Eigen::MatrixXd d = real_gaussian(rng, m, m);
  return mcic::Realization(a.cast<mcic::Complex>(), b.cast<mcic::Complex>(),
                           c.cast<mcic::Complex>(), d.cast<mcic::Complex>());
}

struct BalancedSample {
  mcic::Realization balanced;   // Gramians equal the diagonal of `hankel`
  mcic::Realization scrambled;  // same transfer after a random similarity
  mcic::RealVector hankel;      // prescribed singular values, descending
};

// Build a balanced real system with prescribed distinct Hankel singular
// values: pick B random, rescale C's columns so the diagonal Gram entries
// match, then solve the per-(i, j) 2x2 linear systems
//   A_ij s_j + s_i A_ji = -(B B^T)_ij
//   A_ji s_j + s_i A_ij = -(C^T C)_ij
// for the entries of A. Retries until A is Hurwitz (Lyapunov theory makes
// failures rare for generic B). A random well-conditioned similarity gives
// the scrambled variant with the same transfer function.
inline BalancedSample prescribed_hankel_system(mcic::Rng& rng, int n, int m,
                                               double lo = 0.6,
                                               double hi = 1.8) {
  std::vector<double> sv;
  sv.resize(size_t(n));
  for (int attempt = 0; attempt < 50; ++attempt) {
    for (double& s : sv) s = rng.uniform(lo, hi);
    std::sort(sv.begin(), sv.end(), std::greater<double>());
    bool distinct = true;
    for (int i = 0; i + 1 < n; ++i) {
      if (sv[size_t(i)] - sv[size_t(i) + 1] < 1e-3) distinct = false;
    }
    if (!distinct) continue;

    Eigen::MatrixXd b = real_gaussian(rng, n, m);
    Eigen::MatrixXd c = real_gaussian(rng, m, n);
    Eigen::MatrixXd wb = b * b.transpose();
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      double cc = c.col(i).squaredNorm();
      if (cc < 1e-12 || wb(i, i) < 1e-12) ok = false;
      else c.col(i) *= std::sqrt(wb(i, i) / cc);
    }
    if (!ok) continue;
    Eigen::MatrixXd wc = c.transpose() * c;

    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) a(i, i) = -wb(i, i) / (2.0 * sv[size_t(i)]);
    for (int i = 0; i < n && ok; ++i) {
      for (int j = i + 1; j < n; ++j) {
        double si = sv[size_t(i)], sj = sv[size_t(j)];
        // [sj  si] [A_ij]   [-(wb)_ij]
        // [si  sj] [A_ji] = [-(wc)_ij]
        double det = sj * sj - si * si;
        a(i, j) = (-wb(i, j) * sj + wc(i, j) * si) / det;
        a(j, i) = (-wc(i, j) * sj + wb(i, j) * si) / det;
      }
    }

    mcic::Matrix ac = a.cast<mcic::Complex>();
    if (!mcic::is_hurwitz(ac, 1e-8)) continue;

    BalancedSample out;
    out.hankel = mcic::RealVector(n);
    for (int i = 0; i < n; ++i) out.hankel(i) = sv[size_t(i)];
    out.balanced =
        mcic::Realization(ac, b.cast<mcic::Complex>(), c.cast<mcic::Complex>(),
                          mcic::Matrix::Zero(m, m));

    // Random similarity with controlled condition number.
    Eigen::MatrixXd t = real_gaussian(rng, n, n) +
                        3.0 * Eigen::MatrixXd::Identity(n, n);
    if (std::abs(t.determinant()) < 1e-3) continue;
    Eigen::MatrixXd tinv = t.inverse();
    out.scrambled = mcic::Realization(
        (tinv * a * t).cast<mcic::Complex>(), (tinv * b).cast<mcic::Complex>(),
        (c * t).cast<mcic::Complex>(), mcic::Matrix::Zero(m, m));
    return out;
  }
  throw mcic::Error("prescribed_hankel_system: no Hurwitz sample found");
}

}  // namespace genutil
