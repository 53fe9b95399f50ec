#pragma once

// Independent oracles for the test suite. These deliberately avoid the
// library's own code paths: the exponential oracle is scaling-squaring over a
// plain Taylor series (the library uses Pade), definiteness is cross-checked
// with Sylvester's criterion via leading principal minors (the library uses a
// tridiagonal eigensolver), and 2x2 eigenvalues come from the quadratic
// formula.

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "mcic/matcore.hpp"

namespace oracle {

using mcic::Complex;
using mcic::Matrix;

// exp(A) by scaling A below norm 1/32 and summing the Taylor series.
inline Matrix taylor_expm(const Matrix& a) {
  int squarings = 0;
  double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  while (norm > 0.03125) {
    norm /= 2.0;
    ++squarings;
  }
  Matrix x = a / std::pow(2.0, squarings);
  Matrix term = Matrix::Identity(a.rows(), a.cols());
  Matrix sum = term;
  for (int k = 1; k <= 24; ++k) {
    term = (term * x / double(k)).eval();
    sum += term;
  }
  for (int k = 0; k < squarings; ++k) sum = (sum * sum).eval();
  return sum;
}

// Eigenvalues of a Hermitian 2x2 by the quadratic formula, ascending.
inline std::array<double, 2> herm_eigs_2x2(const Matrix& a) {
  double tr = a(0, 0).real() + a(1, 1).real();
  double det = (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)).real();
  double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
  return {tr / 2.0 - disc, tr / 2.0 + disc};
}

// Sylvester: Hermitian A is positive definite iff every leading principal
// minor has positive determinant.
inline bool sylvester_positive_definite(const Matrix& a) {
  for (Eigen::Index k = 1; k <= a.rows(); ++k) {
    Complex d = a.topLeftCorner(k, k).determinant();
    if (d.real() <= 0.0) return false;
  }
  return a.rows() > 0;
}

// Smallest Rayleigh quotient found by random probing; upper bounds the
// minimum eigenvalue and certifies indefiniteness when negative.
inline double min_rayleigh_probe(const Matrix& a, mcic::Rng& rng,
                                 int probes = 200) {
  double best = std::numeric_limits<double>::infinity();
  for (int p = 0; p < probes; ++p) {
    mcic::Vector v = mcic::gaussian_matrix(a.rows(), 1, rng).col(0);
    v /= v.norm();
    best = std::min(best, (v.adjoint() * a * v)(0, 0).real());
  }
  return best;
}

// Random member of the open cone {A : HA + A*H positive definite} for a
// Hermitian non-singular H: A = H^-1 (Q/2 + iK) with Q positive definite
// and K Hermitian gives HA + A*H = Q exactly.
inline Matrix random_cone_member(const Matrix& h, mcic::Rng& rng,
                                 double ridge = 0.5) {
  Eigen::Index n = h.rows();
  Matrix g = mcic::gaussian_matrix(n, n, rng);
  Matrix q = g * g.adjoint() + ridge * Matrix::Identity(n, n);
  Matrix k = mcic::gaussian_hermitian(n, rng);
  return h.partialPivLu().solve(0.5 * q + Complex(0, 1) * k);
}

}  // namespace oracle
