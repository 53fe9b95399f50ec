#pragma once

// Dense complex linear-algebra kernel: carrier types, the shared tolerance
// policy, Hermitian splitting, definiteness classification, the matrix sign
// function, the matrix exponential, and seeded random matrices.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace mcic {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Relative tolerance used for every rank / definiteness / singularity decision.
// An eigenvalue counts as zero when |lambda| <= tol * max(1, ||M||_2).
inline constexpr double kDefaultTol = 1e-9;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw Error(msg);
}

inline bool is_finite(const Matrix& a) {
  return a.allFinite();
}

inline void require_finite(const Matrix& a, const char* what) {
  require(is_finite(a), std::string(what) + ": non-finite entries");
}

inline void require_square(const Matrix& a, const char* what) {
  require(a.rows() == a.cols(), std::string(what) + ": matrix must be square");
}

inline double spectral_norm(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  return a.jacobiSvd().singularValues()(0);
}

// Zero threshold at the scale of M.
inline double zero_threshold(double norm, double tol = kDefaultTol) {
  return tol * std::max(1.0, norm);
}

struct SingularityVerdict {
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  bool singular = true;  // sigma_min <= tol * sigma_max
};

inline SingularityVerdict smallest_singular_value(const Matrix& a,
                                                  double tol = kDefaultTol) {
  require_finite(a, "smallest_singular_value");
  SingularityVerdict v;
  if (a.rows() == 0 || a.cols() == 0) return v;
  RealVector sv = a.jacobiSvd().singularValues();
  v.sigma_max = sv(0);
  v.sigma_min = sv(sv.size() - 1);
  v.singular = v.sigma_max == 0.0 || v.sigma_min <= tol * v.sigma_max;
  return v;
}

// A = P + iH with P, H Hermitian: P = (A + A*)/2, H = (A - A*)/(2i).
struct HermitianSplit {
  Matrix P;
  Matrix H;
};

inline HermitianSplit hermitian_split(const Matrix& a) {
  require_square(a, "hermitian_split");
  require_finite(a, "hermitian_split");
  HermitianSplit s;
  s.P = 0.5 * (a + a.adjoint());
  s.H = (a - a.adjoint()) / Complex(0.0, 2.0);
  return s;
}

inline bool is_hermitian(const Matrix& a, double tol = kDefaultTol) {
  if (a.rows() != a.cols()) return false;
  double scale = std::max(1.0, a.cwiseAbs().maxCoeff() * double(a.rows()));
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

inline Matrix hermitian_part_exact(const Matrix& a) {
  return 0.5 * (a + a.adjoint());
}

enum class Definiteness {
  PositiveDefinite,
  PositiveSemidefiniteSingular,
  Indefinite,
  NegativeSemidefiniteSingular,
  NegativeDefinite,
};

inline const char* to_string(Definiteness d) {
  switch (d) {
    case Definiteness::PositiveDefinite: return "positive-definite";
    case Definiteness::PositiveSemidefiniteSingular:
      return "positive-semidefinite-singular";
    case Definiteness::Indefinite: return "indefinite";
    case Definiteness::NegativeSemidefiniteSingular:
      return "negative-semidefinite-singular";
    case Definiteness::NegativeDefinite: return "negative-definite";
  }
  return "unknown";
}

struct DefinitenessVerdict {
  Definiteness kind = Definiteness::Indefinite;
  double min_eig = 0.0;
  double max_eig = 0.0;
};

// Requires A Hermitian (up to tolerance). The zero matrix classifies as
// positive-semidefinite-singular.
inline DefinitenessVerdict definiteness(const Matrix& a,
                                        double tol = kDefaultTol) {
  require_square(a, "definiteness");
  require_finite(a, "definiteness");
  require(is_hermitian(a, std::sqrt(tol)), "definiteness: input not Hermitian");
  DefinitenessVerdict v;
  if (a.rows() == 0) {
    v.kind = Definiteness::PositiveDefinite;  // vacuous
    return v;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part_exact(a),
                                           Eigen::EigenvaluesOnly);
  RealVector ev = es.eigenvalues();
  v.min_eig = ev(0);
  v.max_eig = ev(ev.size() - 1);
  double tau = zero_threshold(std::max(std::abs(v.min_eig), std::abs(v.max_eig)), tol);
  if (v.min_eig > tau) {
    v.kind = Definiteness::PositiveDefinite;
  } else if (v.min_eig >= -tau) {
    v.kind = Definiteness::PositiveSemidefiniteSingular;
  } else if (v.max_eig < -tau) {
    v.kind = Definiteness::NegativeDefinite;
  } else if (v.max_eig <= tau) {
    v.kind = Definiteness::NegativeSemidefiniteSingular;
  } else {
    v.kind = Definiteness::Indefinite;
  }
  return v;
}

inline bool is_psd(const DefinitenessVerdict& v) {
  return v.kind == Definiteness::PositiveDefinite ||
         v.kind == Definiteness::PositiveSemidefiniteSingular;
}

inline bool is_pd(const DefinitenessVerdict& v) {
  return v.kind == Definiteness::PositiveDefinite;
}

struct Eigendecomposition {
  Vector values;
  Matrix vectors;
  double vector_condition = 0.0;  // cond_2 of the eigenvector matrix
};

inline Eigendecomposition eigen_decompose(const Matrix& a) {
  require_square(a, "eigen_decompose");
  require_finite(a, "eigen_decompose");
  Eigen::ComplexEigenSolver<Matrix> es(a, true);
  require(es.info() == Eigen::Success, "eigen_decompose: iteration failed");
  Eigendecomposition d;
  d.values = es.eigenvalues();
  d.vectors = es.eigenvectors();
  RealVector sv = d.vectors.jacobiSvd().singularValues();
  double smin = sv(sv.size() - 1);
  d.vector_condition = smin > 0.0 ? sv(0) / smin
                                  : std::numeric_limits<double>::infinity();
  return d;
}

// Matrix sign: E commutes with A, E^2 = I, and spec(A E) lies in the open
// right half-plane. Eigenvalues map to sign(Re lambda); eigenvalues within
// tolerance of the imaginary axis are rejected. Falls back to the Newton
// iteration X <- (X + X^-1)/2 when the eigenvector basis is ill-conditioned.
struct SignMatrixOptions {
  double tol = kDefaultTol;
  double condition_limit = 1e12;
  double newton_tol = 1e-12;
  int newton_max_iter = 100;
};

struct SignMatrixResult {
  Matrix E;
  bool used_newton = false;
  int newton_iterations = 0;
  double eigenvector_condition = 0.0;
};

inline SignMatrixResult sign_matrix_full(const Matrix& a,
                                         const SignMatrixOptions& opt = {}) {
  require_square(a, "sign_matrix");
  require_finite(a, "sign_matrix");
  require(a.rows() > 0, "sign_matrix: empty matrix");
  double scale = std::max(1.0, spectral_norm(a));
  Eigendecomposition d = eigen_decompose(a);
  for (Eigen::Index i = 0; i < d.values.size(); ++i) {
    require(std::abs(d.values(i).real()) > opt.tol * scale,
            "sign_matrix: eigenvalue within tolerance of the imaginary axis");
  }
  SignMatrixResult r;
  r.eigenvector_condition = d.vector_condition;
  if (d.vector_condition <= opt.condition_limit) {
    Vector s(d.values.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      s(i) = d.values(i).real() > 0.0 ? 1.0 : -1.0;
    }
    // E = V diag(sign) V^-1, solved instead of forming the inverse.
    Matrix rhs = (s.asDiagonal() * d.vectors.partialPivLu().solve(
                                       Matrix::Identity(a.rows(), a.rows())))
                     .eval();
    r.E = d.vectors * rhs;
    return r;
  }
  r.used_newton = true;
  Matrix x = a;
  for (int k = 0; k < opt.newton_max_iter; ++k) {
    Matrix xinv = x.inverse();
    Matrix next = 0.5 * (x + xinv);
    ++r.newton_iterations;
    double delta = (next - x).norm();
    x = next;
    if (delta <= opt.newton_tol * std::max(1.0, x.norm())) break;
  }
  r.E = x;
  return r;
}

inline Matrix sign_matrix(const Matrix& a, double tol = kDefaultTol) {
  SignMatrixOptions opt;
  opt.tol = tol;
  return sign_matrix_full(a, opt).E;
}

inline Matrix matrix_exponential(const Matrix& a) {
  require_square(a, "matrix_exponential");
  require_finite(a, "matrix_exponential");
  if (a.rows() == 0) return a;
  return a.exp();
}

inline Matrix matrix_exponential(const Matrix& a, double t) {
  require(std::isfinite(t), "matrix_exponential: non-finite time");
  return matrix_exponential((a * t).eval());
}

// Hermitian square root of a PSD matrix.
inline Matrix hermitian_sqrt(const Matrix& a, double tol = kDefaultTol) {
  DefinitenessVerdict v = definiteness(a, tol);
  require(is_psd(v), "hermitian_sqrt: input not positive semidefinite");
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part_exact(a));
  RealVector ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.cwiseSqrt().asDiagonal() *
         es.eigenvectors().adjoint();
}

// Deterministic seeded randomness. Gaussians come from an explicit
// Box-Muller transform so draws do not depend on the standard library's
// normal_distribution implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() {
    // 53-bit mantissa in [0, 1).
    return double(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }

  double exponential(double mean) {
    double u = uniform();
    while (u <= 0.0) u = uniform();
    return -mean * std::log(u);
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  Complex cnormal() {
    double re = normal();
    double im = normal();
    return Complex(re, im) / std::sqrt(2.0);
  }

  std::uint64_t integer(std::uint64_t n) {
    // Rejection-free modulo is fine here; n is tiny relative to 2^64.
    return gen_() % n;
  }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

inline Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Matrix g(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      g(i, j) = rng.cnormal();
    }
  }
  return g;
}

inline Matrix gaussian_hermitian(Eigen::Index n, Rng& rng) {
  Matrix g = gaussian_matrix(n, n, rng);
  return hermitian_part_exact(g);
}

// Thin Q of a Gaussian draw; phases fixed so the result is unique given the
// seed. rows >= cols, Q* Q = I_cols.
inline Matrix haar_isometry(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  require(rows >= cols, "haar_isometry: need rows >= cols");
  Matrix g = gaussian_matrix(rows, cols, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
  Matrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < cols; ++j) {
    Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

// kn x n isometry used to assemble k-term matrix convex combinations.
inline Matrix random_isometry(int k, int n, std::uint64_t seed) {
  require(k >= 1 && n >= 1, "random_isometry: need k >= 1 and n >= 1");
  Rng rng(seed);
  return haar_isometry(Eigen::Index(k) * n, n, rng);
}

}  // namespace mcic
