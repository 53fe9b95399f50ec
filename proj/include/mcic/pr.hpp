#pragma once

// Sampling-based positive-real verification for real-coefficient rational
// matrix functions F: is F analytic in the open right half-plane with
// positive-semidefinite Hermitian part there (boundary included by limits)?
//
// Three stages:
//   1. Right-half-plane poles. Candidate pole locations are the denominator
//      roots of the (reduced) entries. A candidate strictly inside the right
//      half-plane is only refuted on *evidence*: the Hermitian part must be
//      observably negative on probe rings around it. This keeps the check
//      sound against root-finding artifacts — a double pole on the imaginary
//      axis splits numerically into a pair straddling the axis, and such
//      phantom candidates must not fail an analytic function.
//   2. Boundary sampling: Hermitian part PSD at s = i*omega over a log grid.
//      Samples landing on (or numerically against) an imaginary-axis pole are
//      skipped and counted — axis poles are permitted.
//   3. Interior sampling: Hermitian part PSD on a log-spaced grid in the open
//      right half-plane, real axis included.
//
// Failures carry locations; an empty failure list means every stage passed.

#include <string>
#include <vector>

#include "mcic/rational.hpp"

namespace mcic {

struct PrGrid {
  int boundary_points = 200;
  double omega_min = 1e-4;
  double omega_max = 1e4;
  int interior_re = 20;
  double re_min = 1e-3;
  double re_max = 1e3;
  // Interior imaginary sweep: 0 and +/- (interior_im - 2) / 2 log-spaced
  // magnitudes between im_min and im_max.
  int interior_im = 20;
  double im_min = 1e-2;
  double im_max = 1e3;
  // Relative PSD tolerance: min eig >= -tol * max(1, ||herm part||).
  double tol = 1e-9;
  // Boundary samples with denominator headroom below this are treated as
  // sitting on an axis pole and skipped.
  double pole_skip_headroom = 1e-6;
  // A denominator root counts as a right-half-plane pole candidate only when
  // its real part clears this relative margin.
  double axis_margin = 1e-6;
  int probe_angles = 16;
  // Probe rings shrink geometrically from half the candidate's distance to
  // the axis; up to this many halvings before the candidate is dismissed.
  int probe_shrink_max = 40;
};

enum class PrFailureKind { RhpPole, HermitianIndefinite, NotRealOnReals };

struct PrFailure {
  PrFailureKind kind = PrFailureKind::HermitianIndefinite;
  Complex location{0.0, 0.0};  // pole position or sample point
  double min_eig = 0.0;        // most negative Hermitian-part eigenvalue seen
  std::string detail;
};

struct PrVerdict {
  bool is_pr = true;
  std::vector<PrFailure> failures;
  int boundary_skipped = 0;   // axis-pole samples skipped in stage 2
  int samples_checked = 0;    // PSD samples evaluated (stages 2 and 3)
  int pole_candidates = 0;    // right-half-plane candidates probed in stage 1
};

namespace detail {

struct HermSample {
  bool usable = false;
  double min_eig = 0.0;
  double scale = 1.0;  // max(1, spectral radius of the Hermitian part)
};

inline HermSample herm_min_eig(const RationalMatrix& f, Complex s,
                               double headroom_floor) {
  HermSample out;
  RationalMatrix::Eval e = f(s);
  if (e.min_den_headroom <= headroom_floor || !e.value.allFinite()) return out;
  Matrix p = 0.5 * (e.value + e.value.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(p, Eigen::EigenvaluesOnly);
  require(es.info() == Eigen::Success, "pr_check: eigensolver failed");
  out.usable = true;
  out.min_eig = es.eigenvalues().minCoeff();
  out.scale = std::max({1.0, std::abs(out.min_eig),
                        std::abs(es.eigenvalues().maxCoeff())});
  return out;
}

inline std::vector<double> log_space(double lo, double hi, int n) {
  std::vector<double> out;
  if (n <= 0) return out;
  if (n == 1) {
    out.push_back(lo);
    return out;
  }
  double llo = std::log(lo);
  double lhi = std::log(hi);
  for (int k = 0; k < n; ++k) {
    out.push_back(std::exp(llo + (lhi - llo) * double(k) / double(n - 1)));
  }
  return out;
}

}  // namespace detail

inline PrVerdict pr_check(const RationalMatrix& f, const PrGrid& grid = {}) {
  require(f.size() >= 1, "pr_check: empty function");
  PrVerdict v;
  const double kHeadroomFloor = 1e-12;

  // Stage 1: candidate right-half-plane poles with ring-probe confirmation.
  std::vector<Complex> candidates;
  for (int i = 0; i < f.size(); ++i) {
    for (int j = 0; j < f.size(); ++j) {
      for (Complex z : f.at(i, j).den().roots()) {
        if (z.real() <= grid.axis_margin * std::max(1.0, std::abs(z))) continue;
        bool dup = false;
        for (Complex w : candidates) {
          if (std::abs(z - w) <= 1e-6 * std::max(1.0, std::abs(z))) dup = true;
        }
        if (!dup) candidates.push_back(z);
      }
    }
  }
  v.pole_candidates = int(candidates.size());
  for (Complex z : candidates) {
    // Around a genuine pole the Hermitian part must turn negative on every
    // small enough circle; how small depends on the residue, so the ring
    // shrinks geometrically until negativity shows up or the floor is hit.
    double worst = 0.0;  // most negative relative eigenvalue on the rings
    double radius = 0.5 * z.real();
    for (int shrink = 0; shrink < grid.probe_shrink_max && worst >= -grid.tol;
         ++shrink, radius *= 0.5) {
      for (int k = 0; k < grid.probe_angles; ++k) {
        double ang = 2.0 * 3.14159265358979323846 * double(k) /
                     double(grid.probe_angles);
        Complex s = z + radius * Complex(std::cos(ang), std::sin(ang));
        detail::HermSample h = detail::herm_min_eig(f, s, kHeadroomFloor);
        if (!h.usable) continue;
        worst = std::min(worst, h.min_eig / h.scale);
      }
    }
    if (worst < -grid.tol) {
      PrFailure fail;
      fail.kind = PrFailureKind::RhpPole;
      fail.location = z;
      fail.min_eig = worst;
      fail.detail = "denominator root in the open right half-plane with "
                    "negative Hermitian part on surrounding probe rings";
      v.failures.push_back(fail);
    }
  }

  // Stage 2: boundary grid s = i*omega.
  for (double w : detail::log_space(grid.omega_min, grid.omega_max,
                                    grid.boundary_points)) {
    Complex s(0.0, w);
    RationalMatrix::Eval e = f(s);
    if (e.min_den_headroom <= grid.pole_skip_headroom) {
      ++v.boundary_skipped;
      continue;
    }
    detail::HermSample h = detail::herm_min_eig(f, s, kHeadroomFloor);
    if (!h.usable) {
      ++v.boundary_skipped;
      continue;
    }
    ++v.samples_checked;
    if (h.min_eig < -grid.tol * h.scale) {
      PrFailure fail;
      fail.location = s;
      fail.min_eig = h.min_eig;
      fail.detail = "Hermitian part indefinite on the imaginary axis";
      v.failures.push_back(fail);
    }
  }

  // Stage 3: interior grid, real axis included.
  std::vector<double> ims;
  ims.push_back(0.0);
  int im_half = (grid.interior_im - 2) / 2;
  for (double y : detail::log_space(grid.im_min, grid.im_max, im_half)) {
    ims.push_back(y);
    ims.push_back(-y);
  }
  for (double x : detail::log_space(grid.re_min, grid.re_max,
                                    grid.interior_re)) {
    for (double y : ims) {
      Complex s(x, y);
      detail::HermSample h = detail::herm_min_eig(f, s, kHeadroomFloor);
      if (!h.usable) continue;  // a genuine pole here is stage 1's finding
      ++v.samples_checked;
      if (h.min_eig < -grid.tol * h.scale) {
        PrFailure fail;
        fail.location = s;
        fail.min_eig = h.min_eig;
        fail.detail = "Hermitian part indefinite in the right half-plane";
        v.failures.push_back(fail);
      }
    }
  }

  v.is_pr = v.failures.empty();
  return v;
}

}  // namespace mcic
